use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::lattice::Elem;
use crate::qmatrix::{singletons, QSet, Strategy};

use super::module_from_qset;

/// Pairing of the singletons of `(I, A)` with the Hilbert sections of `Q^I A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BridgeReport {
    pub singletons: Vec<Vec<Elem>>,
    /// Hilbert sections of `Q^I A`, as carrier elements.
    pub sections: Vec<Elem>,
    /// `section_of[i]` is the section `S*` of singleton `i`.
    pub section_of: Vec<Elem>,
    /// `column_section[α]` is the section of column `α` of `A`.
    pub column_section: Vec<Elem>,
}

/// Enumerates singletons and Hilbert sections independently and checks that
/// `S ↦ S*` is a bijection between them with `â_{ST} = ⟨S*, T*⟩`.
pub fn singleton_section_bridge(a: &QSet, strategy: Strategy, cap: usize) -> Result<BridgeReport> {
    let q = a.quantale().clone();
    if let Some(w) = q.stably_gelfand_witness() {
        return Err(Error::NotStablyGelfand(w));
    }
    let m = module_from_qset(a, cap)?;
    let sections = m.module.hilbert_sections();
    let ss = singletons(a, strategy);
    let mut section_of = Vec::with_capacity(ss.len());
    for (i, s) in ss.iter().enumerate() {
        let star: Vec<Elem> = s.column.iter().map(|&x| q.inv(x)).collect();
        match m.element_of(&star) {
            Some(x) if sections.binary_search(&x).is_ok() => section_of.push(x),
            _ => return Err(Error::Theorem(Violation::new("S* is a Hilbert section", vec![i]))),
        }
    }
    let mut sorted = section_of.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted != sections {
        let missing = sections.iter().copied().find(|x| sorted.binary_search(x).is_err());
        return Err(Error::Theorem(Violation::new(
            "every Hilbert section is some S*",
            missing.into_iter().collect::<Vec<_>>(),
        )));
    }
    if section_of.len() != sections.len() {
        return Err(Error::Theorem(Violation::new(
            "S ↦ S* is injective",
            vec![section_of.len()],
        )));
    }
    for (i, s) in ss.iter().enumerate() {
        for (j, t) in ss.iter().enumerate() {
            let hat = s
                .column
                .iter()
                .zip(&t.column)
                .fold(q.bottom(), |acc, (&x, &y)| q.join(acc, q.mul(q.inv(x), y)));
            if hat != m.module.ip(section_of[i], section_of[j]) {
                return Err(Error::Theorem(Violation::new("â_ST = ⟨S*,T*⟩", vec![i, j])));
            }
        }
    }
    let column_section = (0..a.len())
        .map(|b| {
            let col = a.matrix().column(b);
            let i = ss.iter().position(|s| s.column == col).expect("columns are singletons");
            section_of[i]
        })
        .collect();
    Ok(BridgeReport {
        singletons: ss.into_iter().map(|s| s.column).collect(),
        sections,
        section_of,
        column_section,
    })
}
