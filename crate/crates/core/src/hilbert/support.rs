use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::lattice::Elem;
use crate::report::Verdict;

use super::PreHilbertModule;

/// A pre-Hilbert module with its support `sup(x) = ⟨x,x⟩ ∧ e` and the
/// facts checked about it.
#[derive(Clone, Debug, Serialize)]
pub struct SupportedModule {
    #[serde(skip)]
    pub module: PreHilbertModule,
    pub sup: Vec<Elem>,
    /// `sup(ax) = sup(a·sup(x))`
    pub c1: Verdict,
    /// `sup(ax) ≤ sup(a)`
    pub c2: Verdict,
    /// `sup(a1_X) ≤ sup(a)`
    pub c3: Verdict,
    /// `sup(bx) = b ∧ sup(x)` for `b ≤ e`
    pub c4: Verdict,
    /// `a1_X = sup(a)1_X = aa*1_X = aa*a1_X`
    pub top_action: Verdict,
}

impl SupportedModule {
    pub fn stability(&self) -> [&Verdict; 4] {
        [&self.c1, &self.c2, &self.c3, &self.c4]
    }

    pub fn is_stable(&self) -> bool {
        self.stability().iter().all(|v| v.holds())
    }
}

/// Computes `sup(x) = ⟨x,x⟩ ∧ e`, checks it is a support, and evaluates the
/// stability conditions and uniqueness formulas. Requires a stably supported
/// quantale.
pub fn module_support(x: &PreHilbertModule) -> Result<SupportedModule> {
    let q = x.quantale().clone();
    let e = q.require_unit()?;
    if let Verdict::Fails { witness } = q.support().expect("unital").stably_supported() {
        return Err(Error::NotStablySupported(Violation::new("stable support", witness)));
    }
    let (nq, nx) = (q.len(), x.len());
    let sup: Vec<Elem> = (0..nx).map(|v| q.meet(x.ip(v, v), e)).collect();
    for v in 0..nx {
        if !x.leq(v, x.act(sup[v], v)) {
            return Err(Error::SupportAxiomFails(Violation::new("x ≤ sup(x)x", vec![v])));
        }
        for w in 0..nx {
            if x.leq(v, w) && !q.leq(sup[v], sup[w]) {
                return Err(Error::SupportAxiomFails(Violation::new("monotone", vec![v, w])));
            }
        }
    }
    let one_x = x.top();
    let first = |bad: &dyn Fn(Elem, Elem) -> bool| -> Verdict {
        for a in 0..nq {
            for v in 0..nx {
                if bad(a, v) {
                    return Verdict::fails(vec![a, v]);
                }
            }
        }
        Verdict::Holds
    };
    let c1 = first(&|a, v| sup[x.act(a, v)] != q.sup(q.mul(a, sup[v])));
    let c2 = first(&|a, v| !q.leq(sup[x.act(a, v)], q.sup(a)));
    let c3 = Verdict::from_witness(
        (0..nq)
            .find(|&a| !q.leq(sup[x.act(a, one_x)], q.sup(a)))
            .map(|a| vec![a]),
    );
    let base = q.lattice().down_set(e);
    let c4 = first(&|b, v| base.binary_search(&b).is_ok() && sup[x.act(b, v)] != q.meet(b, sup[v]));
    let all = [&c1, &c2, &c3, &c4];
    if let Some(i) = all.iter().position(|v| !v.holds()) {
        return Err(Error::Theorem(Violation::new(
            "supported modules are stably supported",
            vec![i + 1],
        )));
    }
    // sup(x) = ⟨x,1⟩ ∧ e and sup(x)a = ⟨x,1⟩ ∧ a
    for v in 0..nx {
        if sup[v] != q.meet(x.ip(v, one_x), e) {
            return Err(Error::Theorem(Violation::new("sup(x) = ⟨x,1⟩∧e", vec![v])));
        }
        for a in 0..nq {
            if q.mul(sup[v], a) != q.meet(x.ip(v, one_x), a) {
                return Err(Error::Theorem(Violation::new("sup(x)a = ⟨x,1⟩∧a", vec![v, a])));
            }
        }
        for &b in &base {
            if q.leq(b, x.ip(v, v)) && x.leq(v, x.act(b, v)) && b != sup[v] {
                return Err(Error::Theorem(Violation::new(
                    "pointwise uniqueness of sup",
                    vec![v, b],
                )));
            }
        }
    }
    let top_action = top_action_identities(x);
    Ok(SupportedModule {
        module: x.clone(),
        sup,
        c1,
        c2,
        c3,
        c4,
        top_action,
    })
}

/// `a1_X = sup(a)1_X = aa*1_X = aa*a1_X` for every `a`, over a supported quantale.
pub fn top_action_identities(x: &PreHilbertModule) -> Verdict {
    let q = x.quantale();
    let one = x.top();
    Verdict::from_witness(
        (0..q.len())
            .find(|&a| {
                let aa = q.mul(a, q.inv(a));
                let v = x.act(a, one);
                v != x.act(q.sup(a), one) || v != x.act(aa, one) || v != x.act(q.mul(aa, a), one)
            })
            .map(|a| vec![a]),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSections {
    pub local: Vec<Elem>,
    pub hilbert: Vec<Elem>,
    pub equal: bool,
    /// Every local section is the join of the Hilbert sections below it.
    pub join_decomposition: bool,
}

/// Local sections `{s : sup(x∧s)s ≤ x for all x}`, cross-checked against the
/// defining condition `sup(x)s = x for x ≤ s` and compared with `Σ_X`.
pub fn local_sections(x: &SupportedModule) -> Result<LocalSections> {
    let m = &x.module;
    let sup = &x.sup;
    let nx = m.len();
    let carrier = m.carrier();
    let local: Vec<Elem> = (0..nx)
        .filter(|&s| (0..nx).all(|v| m.leq(m.act(sup[carrier.meet(v, s)], s), v)))
        .collect();
    let by_definition: Vec<Elem> = (0..nx)
        .filter(|&s| (0..nx).all(|v| !m.leq(v, s) || m.act(sup[v], s) == v))
        .collect();
    if local != by_definition {
        return Err(Error::Theorem(Violation::new(
            "local section characterizations agree",
            vec![],
        )));
    }
    for &s in &local {
        if let Some(t) = (0..nx).find(|&t| m.leq(t, s) && local.binary_search(&t).is_err()) {
            return Err(Error::Theorem(Violation::new(
                "local sections are downward closed",
                vec![s, t],
            )));
        }
    }
    let hilbert = m.hilbert_sections();
    if let Some(&s) = hilbert.iter().find(|s| local.binary_search(s).is_err()) {
        return Err(Error::Theorem(Violation::new("Σ ⊆ Σ^ℓ", vec![s])));
    }
    let equal = hilbert == local;
    let join_decomposition = local
        .iter()
        .all(|&s| m.carrier().join_all(hilbert.iter().copied().filter(|&t| m.leq(t, s))) == s);
    if equal != join_decomposition {
        return Err(Error::Theorem(Violation::new(
            "Σ = Σ^ℓ iff local sections are joins of sections",
            vec![],
        )));
    }
    Ok(LocalSections {
        local,
        hilbert,
        equal,
        join_decomposition,
    })
}
