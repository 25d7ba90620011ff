use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{PreHilbertModule, QModule};
use crate::lattice::SupLattice;
use crate::quantale::Quantale;

use super::FiniteGroupoid;

/// Largest total space handled; the module carrier is its powerset.
pub const MAX_POINTS: usize = 12;

/// A left action of a groupoid on a set over its objects. `g·x` is defined
/// when `r(g) = p(x)` and lands in the fiber over `d(g)`, so that
/// `m(g, h)·x = g·(h·x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupoidAction {
    pub name: String,
    #[serde(skip)]
    pub groupoid: Arc<FiniteGroupoid>,
    pub points: Vec<String>,
    pub p: Vec<usize>,
    /// `act[g * |E| + x] = g·x`
    pub act: Vec<Option<usize>>,
}

impl GroupoidAction {
    pub fn new(
        name: impl Into<String>,
        groupoid: Arc<FiniteGroupoid>,
        points: Vec<String>,
        p: Vec<usize>,
        act: Vec<Option<usize>>,
    ) -> Result<Self> {
        let a = Self {
            name: name.into(),
            groupoid,
            points,
            p,
            act,
        };
        a.validate()?;
        Ok(a)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidAction(msg));
        let g = &self.groupoid;
        let (n1, ne) = (g.arrow_count(), self.points.len());
        if ne > MAX_POINTS {
            return bad(format!("{ne} points, at most {MAX_POINTS} supported"));
        }
        if self.p.len() != ne || self.act.len() != n1 * ne {
            return bad("table sizes do not match".into());
        }
        if self.p.iter().any(|&x| x >= g.object_count()) {
            return bad("anchor out of range".into());
        }
        for h in 0..n1 {
            for x in 0..ne {
                match (g.r[h] == self.p[x], self.at(h, x)) {
                    (true, Some(y)) if y < ne && self.p[y] == g.d[h] => {}
                    (false, None) => {}
                    _ => return bad(format!("{}·{} is wrong", g.arrows[h], self.points[x])),
                }
            }
        }
        for x in 0..ne {
            if self.at(g.unit[self.p[x]], x) != Some(x) {
                return bad(format!("unit does not fix {}", self.points[x]));
            }
        }
        for a in 0..n1 {
            for b in 0..n1 {
                let Some(ab) = g.m(a, b) else { continue };
                for x in 0..ne {
                    if let Some(y) = self.at(b, x) {
                        if self.at(a, y) != self.at(ab, x) {
                            return bad(format!(
                                "m({}, {}) acts wrongly on {}",
                                g.arrows[a], g.arrows[b], self.points[x]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn at(&self, g: usize, x: usize) -> Option<usize> {
        self.act[g * self.points.len() + x]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The groupoid acting on its arrows by `g·h = m(g, h)`, anchored at `d`.
    pub fn regular(g: &Arc<FiniteGroupoid>) -> Self {
        let n1 = g.arrow_count();
        let act = (0..n1 * n1).map(|k| g.m(k / n1, k % n1)).collect();
        Self::new("regular", g.clone(), g.arrows.clone(), g.d.clone(), act).expect("regular action")
    }

    /// The groupoid acting on its objects: `g·r(g) = d(g)`.
    pub fn objects(g: &Arc<FiniteGroupoid>) -> Self {
        let (n0, n1) = (g.object_count(), g.arrow_count());
        let act = (0..n1 * n0)
            .map(|k| {
                let (h, x) = (k / n0, k % n0);
                (g.r[h] == x).then_some(g.d[h])
            })
            .collect();
        Self::new("objects", g.clone(), g.objects.clone(), (0..n0).collect(), act).expect("object action")
    }

    pub fn disjoint_union(a: &Self, b: &Self) -> Result<Self> {
        if a.groupoid != b.groupoid {
            return Err(Error::InvalidAction("actions of different groupoids".into()));
        }
        let (na, nb) = (a.len(), b.len());
        let ne = na + nb;
        let act = (0..a.groupoid.arrow_count() * ne)
            .map(|k| {
                let (h, x) = (k / ne, k % ne);
                if x < na {
                    a.at(h, x)
                } else {
                    b.at(h, x - na).map(|y| y + na)
                }
            })
            .collect();
        Self::new(
            format!("{}+{}", a.name, b.name),
            a.groupoid.clone(),
            a.points
                .iter()
                .map(|s| format!("l.{s}"))
                .chain(b.points.iter().map(|s| format!("r.{s}")))
                .collect(),
            a.p.iter().chain(&b.p).copied().collect(),
            act,
        )
    }
}

/// The regular and object actions, plus their sum when it stays small.
pub fn catalog_actions(g: &Arc<FiniteGroupoid>) -> Vec<GroupoidAction> {
    let reg = GroupoidAction::regular(g);
    let obj = GroupoidAction::objects(g);
    let mut out = vec![reg.clone(), obj.clone()];
    if reg.len() + obj.len() <= 8 {
        out.push(GroupoidAction::disjoint_union(&reg, &obj).expect("same groupoid"));
    }
    out
}

/// An action read as a module over `O(G)`: carrier `P(E)` indexed by bitmask.
#[derive(Clone, Debug)]
pub struct ActionModule {
    pub action: GroupoidAction,
    pub module: PreHilbertModule,
}

/// Builds `P(E)` with `U·S = {g·x}` and the transporter inner product
/// `⟨S,T⟩ = {g : g·y ∈ S for some y ∈ T}`, and validates it.
pub fn module_from_action(q: &Arc<Quantale>, a: &GroupoidAction) -> Result<ActionModule> {
    let g = &a.groupoid;
    let (n1, ne) = (g.arrow_count(), a.len());
    if q.len() != 1 << n1 {
        return Err(Error::InvalidAction(format!(
            "quantale {} does not match the groupoid",
            q.name()
        )));
    }
    let nx = 1usize << ne;
    // atom_act[h][S] = h·S
    let mut atom_act = vec![0usize; n1 * nx];
    for h in 0..n1 {
        for s in 1..nx {
            let low = s.trailing_zeros() as usize;
            atom_act[h * nx + s] = atom_act[h * nx + (s & (s - 1))] | a.at(h, low).map_or(0, |y| 1 << y);
        }
    }
    let mut action = vec![0usize; q.len() * nx];
    for u in 1..q.len() {
        let low = u.trailing_zeros() as usize;
        let rest = u & (u - 1);
        for s in 0..nx {
            action[u * nx + s] = action[rest * nx + s] | atom_act[low * nx + s];
        }
    }
    // pre[y][S] = {h : h·y ∈ S}
    let mut ip = vec![0usize; nx * nx];
    for s in 0..nx {
        let pre: Vec<usize> = (0..ne)
            .map(|y| {
                (0..n1)
                    .filter(|&h| a.at(h, y).is_some_and(|z| s >> z & 1 == 1))
                    .fold(0, |m, h| m | 1 << h)
            })
            .collect();
        for t in 1..nx {
            let low = t.trailing_zeros() as usize;
            ip[s * nx + t] = ip[s * nx + (t & (t - 1))] | pre[low];
        }
    }
    let labels = (0..nx)
        .map(|m| {
            let items: Vec<&str> = (0..ne)
                .filter(|i| m >> i & 1 == 1)
                .map(|i| a.points[i].as_str())
                .collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    let carrier = SupLattice::powerset(ne).with_labels(labels)?;
    let module = PreHilbertModule::new(QModule::new(q.clone(), carrier, action)?, ip)?;
    if let Some(v) = module.validate().into_iter().next() {
        return Err(Error::InvalidAction(format!("module laws: {v}")));
    }
    Ok(ActionModule {
        action: a.clone(),
        module,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::quantale_of;

    #[test]
    fn z2_regular_sections() {
        let g = Arc::new(FiniteGroupoid::cyclic(2));
        let q = Arc::new(quantale_of(&g).unwrap());
        let m = module_from_action(&q, &GroupoidAction::regular(&g)).unwrap();
        assert_eq!(m.module.len(), 4);
        assert_eq!(m.module.hilbert_sections(), vec![0, 1, 2]);
    }

    #[test]
    fn pair_on_objects_sections() {
        let g = Arc::new(FiniteGroupoid::pair(2));
        let q = Arc::new(quantale_of(&g).unwrap());
        let m = module_from_action(&q, &GroupoidAction::objects(&g)).unwrap();
        let sections = m.module.hilbert_sections();
        // p = id, so every subset is a section
        assert_eq!(sections, vec![0, 1, 2, 3]);
        assert_eq!(m.module.module().join_all(sections.iter().copied()), m.module.top());
    }

    #[test]
    fn trivial_group_on_a_point() {
        let g = Arc::new(FiniteGroupoid::cyclic(1));
        let q = Arc::new(quantale_of(&g).unwrap());
        let m = module_from_action(&q, &GroupoidAction::regular(&g)).unwrap();
        assert_eq!(m.module.len(), 2);
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn bad_anchor_is_rejected() {
        let g = Arc::new(FiniteGroupoid::pair(2));
        let mut a = GroupoidAction::objects(&g);
        a.p.swap(0, 1);
        assert!(matches!(a.validate(), Err(Error::InvalidAction(_))));
    }
}
