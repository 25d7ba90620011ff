//! JSON object files and `catalog:` references.
//!
//! Every file is `{"kind": ..., "payload": ...}`. Elements are referred to by
//! label, so labels must be unique within a lattice. Output is canonical:
//! keys sorted, tables in index order, quantales from the catalog written as
//! `"catalog:NAME"`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::catalog;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidAction};
use crate::hilbert::{PreHilbertModule, QModule};
use crate::lattice::{Elem, SupLattice};
use crate::qmatrix::{QMatrix, QSet};
use crate::quantale::Quantale;

pub const CATALOG_PREFIX: &str = "catalog:";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lattice,
    Quantale,
    Qset,
    Module,
    Groupoid,
    Action,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectFile {
    kind: Kind,
    payload: Value,
}

#[derive(Clone, Debug)]
pub enum Object {
    Lattice(SupLattice),
    Quantale(Arc<Quantale>),
    QSet(QSet),
    Module(PreHilbertModule),
    Groupoid(Arc<FiniteGroupoid>),
    Action(GroupoidAction),
}

impl Object {
    pub fn kind(&self) -> Kind {
        match self {
            Object::Lattice(_) => Kind::Lattice,
            Object::Quantale(_) => Kind::Quantale,
            Object::QSet(_) => Kind::Qset,
            Object::Module(_) => Kind::Module,
            Object::Groupoid(_) => Kind::Groupoid,
            Object::Action(_) => Kind::Action,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeJson {
    elements: Vec<String>,
    covers: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuantaleJson {
    name: String,
    lattice: LatticeJson,
    mul: Vec<Vec<String>>,
    inv: Vec<String>,
    unit: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Ref<T> {
    Catalog(String),
    Inline(T),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QSetJson {
    quantale: Ref<QuantaleJson>,
    index: Vec<String>,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleJson {
    quantale: Ref<QuantaleJson>,
    carrier: LatticeJson,
    /// `action[a][x] = a·x`
    action: Vec<Vec<String>>,
    ip: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowJson {
    id: String,
    d: String,
    r: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidJson {
    name: String,
    objects: Vec<String>,
    arrows: Vec<ArrowJson>,
    /// `[g, h, m(g,h)]` for every composable pair.
    compose: Vec<(String, String, String)>,
    /// Inverse of each arrow, in arrow order.
    inv: Vec<String>,
    units: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionJson {
    name: String,
    groupoid: Ref<GroupoidJson>,
    points: Vec<String>,
    p: BTreeMap<String, String>,
    /// `[g, x, g·x]`
    act: Vec<(String, String, String)>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

struct Names(HashMap<String, Elem>);

impl Names {
    fn new(what: &str, labels: &[String]) -> Result<Self> {
        let mut map = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if map.insert(l.clone(), i).is_some() {
                return Err(schema(format!("duplicate {what} label `{l}`")));
            }
        }
        Ok(Self(map))
    }

    fn get(&self, what: &str, label: &str) -> Result<Elem> {
        self.0
            .get(label)
            .copied()
            .ok_or_else(|| schema(format!("unknown {what} `{label}`")))
    }

    fn table(&self, what: &str, rows: &[Vec<String>], shape: (usize, usize)) -> Result<Vec<Elem>> {
        if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
            return Err(schema(format!("{what} table must be {}×{}", shape.0, shape.1)));
        }
        rows.iter().flatten().map(|l| self.get(what, l)).collect()
    }
}

fn lattice_from(j: &LatticeJson) -> Result<SupLattice> {
    let names = Names::new("element", &j.elements)?;
    let covers = j
        .covers
        .iter()
        .map(|(a, b)| Ok((names.get("element", a)?, names.get("element", b)?)))
        .collect::<Result<Vec<_>>>()?;
    SupLattice::build(j.elements.len(), &covers)?.with_labels(j.elements.clone())
}

fn lattice_to(l: &SupLattice) -> LatticeJson {
    LatticeJson {
        elements: l.labels().to_vec(),
        covers: l
            .covers()
            .into_iter()
            .map(|(a, b)| (l.label(a).to_string(), l.label(b).to_string()))
            .collect(),
    }
}

fn quantale_from(j: &QuantaleJson) -> Result<Quantale> {
    let lattice = lattice_from(&j.lattice)?;
    let n = lattice.len();
    let names = Names::new("element", lattice.labels())?;
    let mul = names.table("mul", &j.mul, (n, n))?;
    let inv = names.table("inv", std::slice::from_ref(&j.inv), (1, n))?;
    let unit = j.unit.as_deref().map(|u| names.get("element", u)).transpose()?;
    Quantale::new(j.name.clone(), lattice, mul, inv, unit)
}

fn quantale_to(q: &Quantale) -> QuantaleJson {
    let n = q.len();
    let label = |x: Elem| q.label(x).to_string();
    QuantaleJson {
        name: q.name().to_string(),
        lattice: lattice_to(q.lattice()),
        mul: (0..n).map(|a| (0..n).map(|b| label(q.mul(a, b))).collect()).collect(),
        inv: (0..n).map(|a| label(q.inv(a))).collect(),
        unit: q.unit().map(label),
    }
}

fn same_quantale(a: &Quantale, b: &Quantale) -> bool {
    a.lattice() == b.lattice()
        && a.mul_table() == b.mul_table()
        && a.inv_table() == b.inv_table()
        && a.unit() == b.unit()
}

fn catalog_name(s: &str) -> Result<&str> {
    s.strip_prefix(CATALOG_PREFIX)
        .ok_or_else(|| schema(format!("reference `{s}` must start with `{CATALOG_PREFIX}`")))
}

fn quantale_ref(r: &Ref<QuantaleJson>) -> Result<Arc<Quantale>> {
    match r {
        Ref::Catalog(s) => {
            let name = catalog_name(s)?;
            catalog::quantale_by_name(name)
                .map(Arc::new)
                .ok_or_else(|| schema(format!("no catalog quantale `{name}`")))
        }
        Ref::Inline(j) => Ok(Arc::new(quantale_from(j)?)),
    }
}

fn quantale_ref_to(q: &Quantale) -> Ref<QuantaleJson> {
    match catalog::quantale_by_name(q.name()) {
        Some(c) if same_quantale(&c, q) => Ref::Catalog(format!("{CATALOG_PREFIX}{}", q.name())),
        _ => Ref::Inline(quantale_to(q)),
    }
}

fn qset_from(j: &QSetJson) -> Result<QSet> {
    let q = quantale_ref(&j.quantale)?;
    let names = Names::new("element", q.lattice().labels())?;
    let k = j.index.len();
    let data = names.table("matrix", &j.matrix, (k, k))?;
    QSet::new(j.index.clone(), QMatrix::new(q, k, k, data)?)
}

fn qset_to(a: &QSet) -> QSetJson {
    let q = a.quantale();
    QSetJson {
        quantale: quantale_ref_to(q),
        index: a.index().to_vec(),
        matrix: a
            .matrix()
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|&x| q.label(x).to_string()).collect())
            .collect(),
    }
}

fn module_from(j: &ModuleJson) -> Result<PreHilbertModule> {
    let q = quantale_ref(&j.quantale)?;
    let carrier = lattice_from(&j.carrier)?;
    let nx = carrier.len();
    let xs = Names::new("carrier element", carrier.labels())?;
    let qs = Names::new("element", q.lattice().labels())?;
    let action = xs.table("action", &j.action, (q.len(), nx))?;
    let ip = qs.table("ip", &j.ip, (nx, nx))?;
    PreHilbertModule::new(QModule::new(q, carrier, action)?, ip)
}

fn module_to(x: &PreHilbertModule) -> ModuleJson {
    let q = x.quantale();
    let c = x.carrier();
    let nx = x.len();
    ModuleJson {
        quantale: quantale_ref_to(q),
        carrier: lattice_to(c),
        action: (0..q.len())
            .map(|a| (0..nx).map(|v| c.label(x.act(a, v)).to_string()).collect())
            .collect(),
        ip: (0..nx)
            .map(|v| (0..nx).map(|w| q.label(x.ip(v, w)).to_string()).collect())
            .collect(),
    }
}

fn groupoid_from(j: &GroupoidJson) -> Result<FiniteGroupoid> {
    let obj = Names::new("object", &j.objects)?;
    let ids: Vec<String> = j.arrows.iter().map(|a| a.id.clone()).collect();
    let arr = Names::new("arrow", &ids)?;
    let n1 = ids.len();
    let mut comp = vec![None; n1 * n1];
    for (g, h, gh) in &j.compose {
        comp[arr.get("arrow", g)? * n1 + arr.get("arrow", h)?] = Some(arr.get("arrow", gh)?);
    }
    if j.inv.len() != n1 {
        return Err(schema("inv must list one inverse per arrow"));
    }
    let mut unit = vec![usize::MAX; j.objects.len()];
    for (x, u) in &j.units {
        unit[obj.get("object", x)?] = arr.get("arrow", u)?;
    }
    if let Some(x) = unit.iter().position(|&u| u == usize::MAX) {
        return Err(schema(format!("object `{}` has no unit", j.objects[x])));
    }
    FiniteGroupoid::new(
        j.name.clone(),
        j.objects.clone(),
        ids,
        j.arrows
            .iter()
            .map(|a| obj.get("object", &a.d))
            .collect::<Result<_>>()?,
        j.arrows
            .iter()
            .map(|a| obj.get("object", &a.r))
            .collect::<Result<_>>()?,
        comp,
        j.inv.iter().map(|g| arr.get("arrow", g)).collect::<Result<_>>()?,
        unit,
    )
}

fn groupoid_to(g: &FiniteGroupoid) -> GroupoidJson {
    let n1 = g.arrow_count();
    GroupoidJson {
        name: g.name.clone(),
        objects: g.objects.clone(),
        arrows: (0..n1)
            .map(|a| ArrowJson {
                id: g.arrows[a].clone(),
                d: g.objects[g.d[a]].clone(),
                r: g.objects[g.r[a]].clone(),
            })
            .collect(),
        compose: (0..n1 * n1)
            .filter_map(|k| {
                g.comp[k].map(|gh| (g.arrows[k / n1].clone(), g.arrows[k % n1].clone(), g.arrows[gh].clone()))
            })
            .collect(),
        inv: g.inv.iter().map(|&i| g.arrows[i].clone()).collect(),
        units: (0..g.object_count())
            .map(|x| (g.objects[x].clone(), g.arrows[g.unit[x]].clone()))
            .collect(),
    }
}

fn action_from(j: &ActionJson) -> Result<GroupoidAction> {
    let g = Arc::new(match &j.groupoid {
        Ref::Catalog(s) => {
            let name = catalog_name(s)?;
            catalog::groupoid_by_name(name).ok_or_else(|| schema(format!("no catalog groupoid `{name}`")))?
        }
        Ref::Inline(gj) => groupoid_from(gj)?,
    });
    let obj = Names::new("object", &g.objects)?;
    let arr = Names::new("arrow", &g.arrows)?;
    let pts = Names::new("point", &j.points)?;
    let ne = j.points.len();
    let mut p = vec![usize::MAX; ne];
    for (x, o) in &j.p {
        p[pts.get("point", x)?] = obj.get("object", o)?;
    }
    if let Some(x) = p.iter().position(|&o| o == usize::MAX) {
        return Err(schema(format!("point `{}` has no anchor", j.points[x])));
    }
    let mut act = vec![None; g.arrow_count() * ne];
    for (h, x, y) in &j.act {
        act[arr.get("arrow", h)? * ne + pts.get("point", x)?] = Some(pts.get("point", y)?);
    }
    GroupoidAction::new(j.name.clone(), g, j.points.clone(), p, act)
}

fn action_to(a: &GroupoidAction) -> ActionJson {
    let g = &a.groupoid;
    let ne = a.len();
    let groupoid = match catalog::groupoid_by_name(&g.name) {
        Some(c) if &c == g.as_ref() => Ref::Catalog(format!("{CATALOG_PREFIX}{}", g.name)),
        _ => Ref::Inline(groupoid_to(g)),
    };
    ActionJson {
        name: a.name.clone(),
        groupoid,
        points: a.points.clone(),
        p: (0..ne)
            .map(|x| (a.points[x].clone(), g.objects[a.p[x]].clone()))
            .collect(),
        act: (0..g.arrow_count() * ne)
            .filter_map(|k| a.act[k].map(|y| (g.arrows[k / ne].clone(), a.points[k % ne].clone(), a.points[y].clone())))
            .collect(),
    }
}

/// Parses an object file.
pub fn from_str(text: &str) -> Result<Object> {
    let file: ObjectFile = serde_json::from_str(text)?;
    let payload = file.payload;
    Ok(match file.kind {
        Kind::Lattice => Object::Lattice(lattice_from(&serde_json::from_value(payload)?)?),
        Kind::Quantale => Object::Quantale(Arc::new(quantale_from(&serde_json::from_value(payload)?)?)),
        Kind::Qset => Object::QSet(qset_from(&serde_json::from_value(payload)?)?),
        Kind::Module => Object::Module(module_from(&serde_json::from_value(payload)?)?),
        Kind::Groupoid => Object::Groupoid(Arc::new(groupoid_from(&serde_json::from_value(payload)?)?)),
        Kind::Action => Object::Action(action_from(&serde_json::from_value(payload)?)?),
    })
}

/// Canonical JSON text of an object, newline terminated.
pub fn to_string(obj: &Object) -> Result<String> {
    let payload = match obj {
        Object::Lattice(l) => serde_json::to_value(lattice_to(l))?,
        Object::Quantale(q) => serde_json::to_value(quantale_to(q))?,
        Object::QSet(a) => serde_json::to_value(qset_to(a))?,
        Object::Module(x) => serde_json::to_value(module_to(x))?,
        Object::Groupoid(g) => serde_json::to_value(groupoid_to(g))?,
        Object::Action(a) => serde_json::to_value(action_to(a))?,
    };
    let file = ObjectFile {
        kind: obj.kind(),
        payload,
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    Ok(s)
}

/// Resolves `catalog:NAME`. Plain names are quantales, then lattices;
/// `lattice:`, `groupoid:` and `action:` prefixes select the other catalogs,
/// `module:Q` is `Q` over itself and `qset:Q` is the one-point Q-set on the unit.
pub fn from_catalog(uri: &str) -> Result<Object> {
    let name = catalog_name(uri)?;
    let missing = || schema(format!("no catalog entry `{name}`"));
    if let Some(n) = name.strip_prefix("lattice:") {
        return catalog::lattice_by_name(n).map(Object::Lattice).ok_or_else(missing);
    }
    if let Some(n) = name.strip_prefix("groupoid:") {
        return catalog::groupoid_by_name(n)
            .map(|g| Object::Groupoid(Arc::new(g)))
            .ok_or_else(missing);
    }
    if let Some(n) = name.strip_prefix("action:") {
        return catalog::action_by_name(n).map(Object::Action).ok_or_else(missing);
    }
    if let Some(n) = name.strip_prefix("module:") {
        let q = catalog::quantale_by_name(n).ok_or_else(missing)?;
        return Ok(Object::Module(PreHilbertModule::regular(Arc::new(q))));
    }
    if let Some(n) = name.strip_prefix("qset:") {
        let q = Arc::new(catalog::quantale_by_name(n).ok_or_else(missing)?);
        let e = q.require_unit()?;
        return Ok(Object::QSet(QSet::point(q, e)?));
    }
    if let Some(q) = catalog::quantale_by_name(name) {
        return Ok(Object::Quantale(Arc::new(q)));
    }
    catalog::lattice_by_name(name).map(Object::Lattice).ok_or_else(missing)
}

/// A `catalog:` URI or a path to an object file.
pub fn load(arg: &str) -> Result<Object> {
    if arg.starts_with(CATALOG_PREFIX) {
        return from_catalog(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| schema(format!("{arg}: {e}")))?;
    from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(obj: &Object) {
        let text = to_string(obj).unwrap();
        let again = to_string(&from_str(&text).unwrap()).unwrap();
        assert_eq!(text, again);
    }

    #[test]
    fn catalog_objects_round_trip() {
        for uri in [
            "catalog:egger8",
            "catalog:quantale_r4",
            "catalog:lattice:m3",
            "catalog:groupoid:pair2",
            "catalog:groupoid:z2+pair2",
            "catalog:action:z3/regular",
            "catalog:module:quantale_r4",
            "catalog:qset:relq2",
        ] {
            round_trip(&from_catalog(uri).unwrap());
        }
    }

    #[test]
    fn catalog_quantale_written_by_reference() {
        let q = Arc::new(catalog::relq(2));
        let a = QSet::point(q.clone(), q.unit().unwrap()).unwrap();
        let text = to_string(&Object::QSet(a)).unwrap();
        assert!(text.contains("\"catalog:relq2\""));
        round_trip(&from_str(&text).unwrap());
    }

    #[test]
    fn unknown_label_is_a_schema_error() {
        let text = r#"{"kind":"lattice","payload":{"elements":["0","1"],"covers":[["0","2"]]}}"#;
        assert!(matches!(from_str(text), Err(Error::Schema(_))));
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = r#"{"kind":"lattice","payload":{"elements":["0"],"covers":[],"extra":1}}"#;
        assert!(matches!(from_str(text), Err(Error::Json(_))));
    }
}
