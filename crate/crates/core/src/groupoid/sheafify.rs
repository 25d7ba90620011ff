use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::hilbert::{hom_violation, module_from_qset, HomTable, MatrixModule, QModule};
use crate::lattice::Elem;
use crate::qmatrix::{QMatrix, QSet};
use crate::report::Verdict;

use super::ActionModule;

/// A Q-module whose restriction to the base locale `B = ↓e` is a sheaf:
/// `ς(x) = ⋀{b ∈ B : bx = x}` is the extent and `⟨x,y⟩^B = ς(x∧y)`.
#[derive(Clone, Debug)]
pub struct EtaleLocale {
    pub module: QModule,
    pub sup: Vec<Elem>,
    /// Local sections `{s : ⟨y,s⟩^B s ≤ y for all y}`, bottom included.
    pub sections: Vec<Elem>,
}

impl EtaleLocale {
    pub fn new(module: QModule) -> Result<Self> {
        let q = module.quantale().clone();
        let e = q.require_unit()?;
        let base = q.base_locale()?.elements;
        let nx = module.len();
        if let Some(x) = (0..nx).find(|&x| module.act(e, x) != x) {
            return Err(Error::NotEtale(Violation::new("ex = x", vec![x])));
        }
        let sup: Vec<Elem> = (0..nx)
            .map(|x| {
                base.iter()
                    .copied()
                    .filter(|&b| module.act(b, x) == x)
                    .fold(e, |acc, b| q.meet(acc, b))
            })
            .collect();
        if let Some(x) = (0..nx).find(|&x| module.act(sup[x], x) != x) {
            return Err(Error::NotEtale(Violation::new("ς(x)x = x", vec![x])));
        }
        let bip = |x: Elem, y: Elem| sup[module.meet(x, y)];
        let sections: Vec<Elem> = (0..nx)
            .filter(|&s| (0..nx).all(|y| module.leq(module.act(bip(y, s), s), y)))
            .collect();
        for x in 0..nx {
            let rebuilt = module.join_all(sections.iter().map(|&s| module.act(bip(x, s), s)));
            if rebuilt != x {
                return Err(Error::NotEtale(Violation::new("x = ⋁ ⟨x,s⟩^B s", vec![x])));
            }
        }
        Ok(Self { module, sup, sections })
    }

    pub fn bip(&self, x: Elem, y: Elem) -> Elem {
        self.sup[self.module.meet(x, y)]
    }
}

/// The Q-set of local sections and the comparison `κ : X → Q^I M`.
#[derive(Clone, Debug, Serialize)]
pub struct Sheafification {
    pub sections: Vec<Elem>,
    #[serde(serialize_with = "serialize_rows")]
    pub qset: QSet,
    #[serde(skip)]
    pub rebuilt: MatrixModule,
    /// `kappa[x] = ⋁_s ⟨x,s⟩^B · s̃`, an isomorphism onto `Q^I M`.
    pub kappa: HomTable,
    /// `⋁Σ = 1`
    pub sections_cover: Verdict,
    /// Partial units carry local sections to local sections.
    pub partial_units_act: Verdict,
}

fn serialize_rows<S: serde::Serializer>(a: &QSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&a.matrix().to_rows(), s)
}

/// `m_{st} = ⋁{a ∈ I(Q) : sup(a*) ≤ ς(t), at ≤ s}` over the local sections.
pub fn sheafify(x: &EtaleLocale, cap: usize) -> Result<Sheafification> {
    let module = &x.module;
    let q = module.quantale().clone();
    let e = q.require_unit()?;
    let units = q.partial_units()?.elements;
    let sigma = &x.sections;
    let k = sigma.len();
    let matrix = QMatrix::from_fn(q.clone(), k, k, |i, j| {
        let (s, t) = (sigma[i], sigma[j]);
        units
            .iter()
            .copied()
            .filter(|&a| q.leq(q.sup(q.inv(a)), x.sup[t]) && module.leq(module.act(a, t), s))
            .fold(q.bottom(), |acc, a| q.join(acc, a))
    });
    let index = sigma.iter().map(|&s| module.carrier().label(s).to_string()).collect();
    let qset = QSet::new(index, matrix).map_err(|err| match err {
        Error::NotAQSet(v) => Error::Theorem(v),
        other => other,
    })?;
    for i in 0..k {
        for j in 0..k {
            if q.meet(qset.get(i, j), e) != x.bip(sigma[i], sigma[j]) {
                return Err(Error::Theorem(Violation::new(
                    "m_st ∧ e = ς(s∧t)",
                    vec![sigma[i], sigma[j]],
                )));
            }
        }
    }
    let rebuilt = module_from_qset(&qset, cap)?;
    let mut kappa = Vec::with_capacity(module.len());
    for v in 0..module.len() {
        let vector: Vec<Elem> = (0..k)
            .map(|t| {
                (0..k).fold(q.bottom(), |acc, s| {
                    q.join(acc, q.mul(x.bip(v, sigma[s]), qset.get(s, t)))
                })
            })
            .collect();
        match rebuilt.element_of(&vector) {
            Some(y) => kappa.push(y),
            None => return Err(Error::Theorem(Violation::new("κ lands in Q^I M", vec![v]))),
        }
    }
    let mut hit = vec![false; rebuilt.module.len()];
    for (v, &y) in kappa.iter().enumerate() {
        if std::mem::replace(&mut hit[y], true) {
            return Err(Error::Theorem(Violation::new("κ is injective", vec![v])));
        }
    }
    if let Some(y) = hit.iter().position(|&h| !h) {
        return Err(Error::Theorem(Violation::new("κ is surjective", vec![y])));
    }
    if let Some(v) = hom_violation(module, rebuilt.module.module(), &kappa) {
        return Err(Error::Theorem(v));
    }
    let sections_cover = if module.join_all(sigma.iter().copied()) == module.top() {
        Verdict::Holds
    } else {
        Verdict::fails(vec![module.join_all(sigma.iter().copied())])
    };
    let partial_units_act = Verdict::from_witness(
        units
            .iter()
            .flat_map(|&a| sigma.iter().map(move |&t| (a, t)))
            .find(|&(a, t)| sigma.binary_search(&module.act(a, t)).is_err())
            .map(|(a, t)| vec![a, t]),
    );
    Ok(Sheafification {
        sections: sigma.clone(),
        qset,
        rebuilt,
        kappa,
        sections_cover,
        partial_units_act,
    })
}

/// Sheafifies an action module and checks it against its own inner product:
/// `ς(x) = ⟨x,x⟩ ∧ e`, `x = ⋁_s (⟨x,s⟩∧e) s`, and `⟨s,t⟩ = m_st` on sections.
pub fn sheafify_action(a: &ActionModule, cap: usize) -> Result<(EtaleLocale, Sheafification)> {
    let x = &a.module;
    let q = x.quantale().clone();
    let e = q.require_unit()?;
    let locale = EtaleLocale::new(x.module().clone())?;
    for v in 0..x.len() {
        if locale.sup[v] != q.meet(x.ip(v, v), e) {
            return Err(Error::Theorem(Violation::new("ς(x) = ⟨x,x⟩∧e", vec![v])));
        }
        let rebuilt = x
            .module()
            .join_all(locale.sections.iter().map(|&s| x.act(q.meet(x.ip(v, s), e), s)));
        if rebuilt != v {
            return Err(Error::Theorem(Violation::new("x = ⋁ ⟨x,s⟩^ℓ s", vec![v])));
        }
    }
    let sh = sheafify(&locale, cap)?;
    for (i, &s) in sh.sections.iter().enumerate() {
        for (j, &t) in sh.sections.iter().enumerate() {
            if x.ip(s, t) != sh.qset.get(i, j) {
                return Err(Error::Theorem(Violation::new("⟨s,t⟩ = m_st", vec![s, t])));
            }
        }
    }
    Ok((locale, sh))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::groupoid::{module_from_action, quantale_of, FiniteGroupoid, GroupoidAction};
    use crate::hilbert::DEFAULT_CARRIER_CAP;

    #[test]
    fn z2_regular_matrix() {
        let g = Arc::new(FiniteGroupoid::cyclic(2));
        let q = Arc::new(quantale_of(&g).unwrap());
        let m = module_from_action(&q, &GroupoidAction::regular(&g)).unwrap();
        let (_, sh) = sheafify_action(&m, DEFAULT_CARRIER_CAP).unwrap();
        assert_eq!(sh.sections, vec![0, 1, 2]);
        // {e} and {g} are translated into each other by g alone
        assert_eq!(sh.qset.get(1, 2), 2);
        assert_eq!(sh.qset.get(2, 1), 2);
        assert!(q.leq(1, sh.qset.get(1, 1)));
    }

    #[test]
    fn discrete_action_gives_frame_valued_set() {
        let g = Arc::new(FiniteGroupoid::discrete(2));
        let q = Arc::new(quantale_of(&g).unwrap());
        let m = module_from_action(&q, &GroupoidAction::objects(&g)).unwrap();
        let (locale, sh) = sheafify_action(&m, DEFAULT_CARRIER_CAP).unwrap();
        for (i, &s) in sh.sections.iter().enumerate() {
            for (j, &t) in sh.sections.iter().enumerate() {
                assert_eq!(sh.qset.get(i, j), locale.bip(s, t));
            }
        }
    }
}
