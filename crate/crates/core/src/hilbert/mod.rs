//! Left Q-modules with inner products: sections, bases, adjoints, the
//! matrix construction `Q^I A`, and supports.

mod bridge;
mod hom;
mod matrix_module;
mod support;

pub use bridge::{singleton_section_bridge, BridgeReport};
pub use hom::{
    adjoint, compose, enumerate_homs, functor_m, hom_from_relation, hom_leq, hom_violation, is_direct_image, join_homs,
    HomTable,
};
pub use matrix_module::{module_from_qset, qset_from_basis, representation_iso, MatrixModule, DEFAULT_CARRIER_CAP};
pub use support::{local_sections, module_support, top_action_identities, LocalSections, SupportedModule};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result, Violation};
use crate::lattice::{Elem, SupLattice};
use crate::quantale::Quantale;
use crate::report::Verdict;

/// A left Q-module on a finite carrier.
#[derive(Clone)]
pub struct QModule {
    q: Arc<Quantale>,
    carrier: SupLattice,
    action: Vec<u32>,
}

impl fmt::Debug for QModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QModule")
            .field("quantale", &self.q.name())
            .field("carrier", &self.carrier.len())
            .finish()
    }
}

impl QModule {
    /// `action[a][x] = a·x`
    pub fn new(q: Arc<Quantale>, carrier: SupLattice, action: Vec<Elem>) -> Result<Self> {
        let (nq, nx) = (q.len(), carrier.len());
        if action.len() != nq * nx {
            return Err(Error::TableShape {
                table: "action",
                expected: nq * nx,
                found: action.len(),
            });
        }
        if let Some(&x) = action.iter().find(|&&x| x >= nx) {
            return Err(Error::OutOfRange { index: x, size: nx });
        }
        Ok(Self {
            q,
            carrier,
            action: action.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// The quantale acting on itself by left multiplication.
    pub fn regular(q: Arc<Quantale>) -> Self {
        let n = q.len();
        let action = (0..n * n).map(|k| q.mul(k / n, k % n)).collect();
        let carrier = q.lattice().clone();
        Self::new(q, carrier, action).expect("regular action is well formed")
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.q
    }

    pub fn carrier(&self) -> &SupLattice {
        &self.carrier
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn act(&self, a: Elem, x: Elem) -> Elem {
        self.action[a * self.len() + x] as Elem
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.carrier.join(x, y)
    }

    #[inline]
    pub fn meet(&self, x: Elem, y: Elem) -> Elem {
        self.carrier.meet(x, y)
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.carrier.leq(x, y)
    }

    #[inline]
    pub fn bottom(&self) -> Elem {
        self.carrier.bottom()
    }

    #[inline]
    pub fn top(&self) -> Elem {
        self.carrier.top()
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = Elem>) -> Elem {
        self.carrier.join_all(xs)
    }

    /// Module laws, each with its first violating tuple.
    pub fn validate(&self) -> Vec<Violation> {
        let q = &self.q;
        let (nq, nx) = (q.len(), self.len());
        let mut out = Vec::new();
        let mut check = |law: &str, w: Option<Vec<Elem>>| {
            if let Some(w) = w {
                out.push(Violation::new(law, w));
            }
        };
        check(
            "(ab)x = a(bx)",
            triples(nq, nq, nx, |a, b, x| {
                self.act(q.mul(a, b), x) != self.act(a, self.act(b, x))
            }),
        );
        check(
            "a(x∨y) = ax∨ay",
            triples(nq, nx, nx, |a, x, y| {
                self.act(a, self.join(x, y)) != self.join(self.act(a, x), self.act(a, y))
            }),
        );
        check(
            "(a∨b)x = ax∨bx",
            triples(nq, nq, nx, |a, b, x| {
                self.act(q.join(a, b), x) != self.join(self.act(a, x), self.act(b, x))
            }),
        );
        check(
            "a0 = 0",
            (0..nq)
                .find(|&a| self.act(a, self.bottom()) != self.bottom())
                .map(|a| vec![a]),
        );
        check(
            "0x = 0",
            (0..nx)
                .find(|&x| self.act(q.bottom(), x) != self.bottom())
                .map(|x| vec![x]),
        );
        if let Some(e) = q.unit() {
            check("ex = x", (0..nx).find(|&x| self.act(e, x) != x).map(|x| vec![x]));
        }
        out
    }
}

fn triples(n1: usize, n2: usize, n3: usize, bad: impl Fn(Elem, Elem, Elem) -> bool) -> Option<Vec<Elem>> {
    for a in 0..n1 {
        for b in 0..n2 {
            for c in 0..n3 {
                if bad(a, b, c) {
                    return Some(vec![a, b, c]);
                }
            }
        }
    }
    None
}

/// A Q-module with a Q-valued inner product.
#[derive(Clone, Debug)]
pub struct PreHilbertModule {
    module: QModule,
    ip: Vec<u32>,
}

impl PreHilbertModule {
    /// `ip[x][y] = ⟨x, y⟩`
    pub fn new(module: QModule, ip: Vec<Elem>) -> Result<Self> {
        let (nq, nx) = (module.q.len(), module.len());
        if ip.len() != nx * nx {
            return Err(Error::TableShape {
                table: "ip",
                expected: nx * nx,
                found: ip.len(),
            });
        }
        if let Some(&x) = ip.iter().find(|&&x| x >= nq) {
            return Err(Error::OutOfRange { index: x, size: nq });
        }
        Ok(Self {
            module,
            ip: ip.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// The quantale over itself with `⟨a, b⟩ = ab*`.
    pub fn regular(q: Arc<Quantale>) -> Self {
        let n = q.len();
        let ip = (0..n * n).map(|k| q.mul(k / n, q.inv(k % n))).collect();
        Self::new(QModule::regular(q), ip).expect("well formed")
    }

    pub fn module(&self) -> &QModule {
        &self.module
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.module.q
    }

    pub fn carrier(&self) -> &SupLattice {
        &self.module.carrier
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.module.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn ip(&self, x: Elem, y: Elem) -> Elem {
        self.ip[x * self.len() + y] as Elem
    }

    #[inline]
    pub fn act(&self, a: Elem, x: Elem) -> Elem {
        self.module.act(a, x)
    }

    #[inline]
    pub fn join(&self, x: Elem, y: Elem) -> Elem {
        self.module.join(x, y)
    }

    #[inline]
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        self.module.leq(x, y)
    }

    #[inline]
    pub fn bottom(&self) -> Elem {
        self.module.bottom()
    }

    #[inline]
    pub fn top(&self) -> Elem {
        self.module.top()
    }

    /// Module laws followed by the inner product axioms.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.module.validate();
        let q = self.quantale();
        let (nq, nx) = (q.len(), self.len());
        let mut check = |law: &str, w: Option<Vec<Elem>>| {
            if let Some(w) = w {
                out.push(Violation::new(law, w));
            }
        };
        check(
            "⟨ax,y⟩ = a⟨x,y⟩",
            triples(nq, nx, nx, |a, x, y| {
                self.ip(self.act(a, x), y) != q.mul(a, self.ip(x, y))
            }),
        );
        check(
            "⟨x∨x',y⟩ = ⟨x,y⟩∨⟨x',y⟩",
            triples(nx, nx, nx, |x, x2, y| {
                self.ip(self.join(x, x2), y) != q.join(self.ip(x, y), self.ip(x2, y))
            }),
        );
        check(
            "⟨0,y⟩ = 0",
            (0..nx)
                .find(|&y| self.ip(self.bottom(), y) != q.bottom())
                .map(|y| vec![y]),
        );
        check(
            "⟨x,y⟩ = ⟨y,x⟩*",
            (0..nx)
                .flat_map(|x| (0..nx).map(move |y| (x, y)))
                .find(|&(x, y)| self.ip(x, y) != q.inv(self.ip(y, x)))
                .map(|(x, y)| vec![x, y]),
        );
        out
    }

    /// First pair `x ≠ y` with `⟨x,-⟩ = ⟨y,-⟩`.
    pub fn nondegenerate(&self) -> Verdict {
        let nx = self.len();
        let row = |x: Elem| &self.ip[x * nx..(x + 1) * nx];
        for x in 0..nx {
            for y in x + 1..nx {
                if row(x) == row(y) {
                    return Verdict::fails(vec![x, y]);
                }
            }
        }
        Verdict::Holds
    }

    /// `⋁_{s∈Σ} ⟨x,s⟩ s`
    pub fn reconstruct(&self, x: Elem, sigma: &[Elem]) -> Elem {
        sigma
            .iter()
            .fold(self.bottom(), |acc, &s| self.join(acc, self.act(self.ip(x, s), s)))
    }

    /// `{s : ⟨x,s⟩s ≤ x for all x}`
    pub fn hilbert_sections(&self) -> Vec<Elem> {
        let nx = self.len();
        (0..nx)
            .filter(|&s| (0..nx).all(|x| self.leq(self.act(self.ip(x, s), s), x)))
            .collect()
    }

    /// First `x` with `x ≠ ⋁_{s∈Σ} ⟨x,s⟩s`.
    pub fn basis_witness(&self, sigma: &[Elem]) -> Option<Elem> {
        (0..self.len()).find(|&x| self.reconstruct(x, sigma) != x)
    }

    pub fn is_hilbert_basis(&self, sigma: &[Elem]) -> Verdict {
        Verdict::from_witness(self.basis_witness(sigma).map(|x| vec![x]))
    }

    pub fn has_enough_sections(&self) -> bool {
        self.basis_witness(&self.hilbert_sections()).is_none()
    }

    /// First `(x, y)` with `⟨x,y⟩ ≠ ⋁_{s∈Σ} ⟨x,s⟩⟨s,y⟩`.
    pub fn parseval_witness(&self, sigma: &[Elem]) -> Option<(Elem, Elem)> {
        let q = self.quantale();
        let nx = self.len();
        for x in 0..nx {
            for y in 0..nx {
                let sum = sigma
                    .iter()
                    .fold(q.bottom(), |acc, &s| q.join(acc, q.mul(self.ip(x, s), self.ip(s, y))));
                if sum != self.ip(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// A basis contained in `Σ_X` from which no element can be dropped,
    /// found by removing sections greedily from the largest index down.
    pub fn minimal_basis(&self) -> Result<Vec<Elem>> {
        let mut sigma = self.hilbert_sections();
        if let Some(x) = self.basis_witness(&sigma) {
            return Err(Error::NotEnoughSections(x));
        }
        let mut i = sigma.len();
        while i > 0 {
            i -= 1;
            let removed = sigma.remove(i);
            if self.basis_witness(&sigma).is_some() {
                sigma.insert(i, removed);
            }
        }
        Ok(sigma)
    }
}
