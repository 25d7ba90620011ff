use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qlab_core::groupoid::{
    catalog_actions, module_from_action, quantale_of, sheafify_action, verify_equivalence, GroupoidAction,
};
use qlab_core::hilbert::{local_sections, module_support, PreHilbertModule, DEFAULT_CARRIER_CAP};
use qlab_core::io::{self, Object};
use qlab_core::modelsearch::{search, SearchSpec};
use qlab_core::qmatrix::{completion, QMatrix, Strategy};
use qlab_core::quantale::parse_requirements;
use qlab_core::{catalog, Elem, Error, Quantale, SupLattice, Verdict, Violation};

#[derive(Parser)]
#[command(
    name = "qlab",
    version,
    about = "Finite involutive quantales, Q-sets and Hilbert modules"
)]
struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load an object and check its axioms.
    Check { input: String },
    /// Evaluate every classification flag of a quantale.
    Classify { input: String },
    /// Singletons and completion of a Q-set.
    Complete {
        input: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Write the completion as a Q-set file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Hilbert sections of a module, and local sections when supported.
    Sections { input: String },
    /// Whether a set of elements is a Hilbert basis.
    BasisCheck {
        input: String,
        /// Comma separated carrier labels.
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<String>,
    },
    /// Sheafify the module of a groupoid action.
    Sheafify {
        input: String,
        /// Write the Q-set of local sections.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Compare equivariant maps with sheaf homomorphisms. Without actions the
    /// catalog actions of the groupoid are used.
    VerifyEquivalence { groupoid: String, actions: Vec<String> },
    /// Enumerate quantale structures on a lattice.
    Search {
        #[arg(long)]
        lattice: String,
        /// e.g. `stably_supported,!modular`
        #[arg(long, default_value = "")]
        require: String,
        #[arg(long)]
        limit: Option<usize>,
        /// Maximum number of candidate values tried; accepts `1e8`.
        #[arg(long, env = "QLAB_BUDGET")]
        budget: Option<String>,
        /// Unit, as a lattice label.
        #[arg(long)]
        unit: Option<String>,
        #[arg(long)]
        trivial_involution: bool,
        /// Keep one model per lattice automorphism orbit.
        #[arg(long)]
        dedup: bool,
        /// Directory for `model<i>.json` files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List catalog entries, or print one entry (or file) as canonical JSON.
    Catalog { entry: Option<String> },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Exhaustive,
    Propagate,
}

/// What a command produced: a report and whether the property checked held.
struct Report {
    text: String,
    json: Value,
    holds: bool,
}

enum Failure {
    /// Bad input: unreadable, malformed, or outside the supported sizes.
    Input(String),
    /// A property failed; the message carries the witness.
    False(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Theorem(_)
            | Error::NotEtale(_)
            | Error::NotStablySupported(_)
            | Error::NotStablyGelfand(_)
            | Error::NotUnital
            | Error::NotAQSet(_)
            | Error::NotARelation(_)
            | Error::NotAMap(_)
            | Error::NotABasis(_)
            | Error::NotEnoughSections(_)
            | Error::AdjointIdentityFails(..)
            | Error::NotAHom(_)
            | Error::SupportAxiomFails(_)
            | Error::InvalidQuantale(_)
            | Error::BNotLocale(..) => Failure::False(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("reports serialize"));
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(if r.holds { 0 } else { 1 })
        }
        Err(Failure::False(msg)) => {
            eprintln!("false: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Check { input } => check(&io::load(input)?),
        Command::Classify { input } => classify(&*want_quantale(io::load(input)?)?),
        Command::Complete { input, strategy, emit } => complete(input, *strategy, emit.as_ref()),
        Command::Sections { input } => sections(&want_module(io::load(input)?)?),
        Command::BasisCheck { input, sigma } => basis_check(&want_module(io::load(input)?)?, sigma),
        Command::Sheafify { input, emit } => sheafify(input, emit.as_ref()),
        Command::VerifyEquivalence { groupoid, actions } => equivalence(groupoid, actions),
        Command::Search {
            lattice,
            require,
            limit,
            budget,
            unit,
            trivial_involution,
            dedup,
            out,
        } => {
            let lattice = match io::load(lattice)? {
                Object::Lattice(l) => l,
                Object::Quantale(q) => q.lattice().clone(),
                o => return Err(wrong_kind("lattice", &o)),
            };
            let mut spec = SearchSpec::new(lattice.clone()).require(parse_requirements(require)?);
            spec.limit = *limit;
            spec.dedup = *dedup;
            if let Some(b) = budget {
                spec.budget = parse_budget(b)?;
            }
            if let Some(u) = unit {
                spec = spec.unit(find(&lattice, "lattice", u)?);
            }
            if *trivial_involution {
                spec = spec.trivial_involution();
            }
            run_search(&spec, out.as_ref())
        }
        Command::Catalog { entry } => catalog_cmd(entry.as_deref()),
    }
}

fn wrong_kind(expected: &str, o: &Object) -> Failure {
    Failure::Input(format!("expected a {expected}, got a {:?}", o.kind()).to_lowercase())
}

fn want_quantale(o: Object) -> Result<Arc<Quantale>, Failure> {
    match o {
        Object::Quantale(q) => Ok(q),
        o => Err(wrong_kind("quantale", &o)),
    }
}

fn want_module(o: Object) -> Result<PreHilbertModule, Failure> {
    match o {
        Object::Module(m) => Ok(m),
        o => Err(wrong_kind("module", &o)),
    }
}

fn find(l: &SupLattice, what: &str, label: &str) -> Result<Elem, Failure> {
    l.find_label(label)
        .ok_or_else(|| Failure::Input(format!("unknown {what} element `{label}`")))
}

fn parse_budget(s: &str) -> Result<u64, Failure> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
        _ => Err(Failure::Input(format!("invalid budget `{s}`"))),
    }
}

fn labels(l: &SupLattice, xs: &[Elem]) -> Vec<String> {
    xs.iter().map(|&x| l.label(x).to_string()).collect()
}

fn verdict_text(l: &SupLattice, v: &Verdict) -> String {
    match v {
        Verdict::Holds => "true".into(),
        Verdict::NotApplicable => "n/a".into(),
        Verdict::Fails { witness } if witness.is_empty() => "false".into(),
        Verdict::Fails { witness } => format!("false  witness ({})", labels(l, witness).join(", ")),
    }
}

fn verdict_json(l: &SupLattice, v: &Verdict) -> Value {
    match v {
        Verdict::Holds => json!({"status": "holds"}),
        Verdict::NotApplicable => json!({"status": "not_applicable"}),
        Verdict::Fails { witness } => json!({"status": "fails", "witness": labels(l, witness)}),
    }
}

fn violations_json(vs: &[Violation]) -> Value {
    json!(vs
        .iter()
        .map(|v| json!({"law": v.law, "witness": v.witness}))
        .collect::<Vec<_>>())
}

fn matrix_text(out: &mut String, q: &Quantale, m: &QMatrix) {
    let rows: Vec<Vec<&str>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|&x| q.label(x)).collect())
        .collect();
    let width = rows.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(0);
    for r in rows {
        let cells: Vec<String> = r.iter().map(|s| format!("{s:>width$}")).collect();
        let _ = writeln!(out, "  [{}]", cells.join(" "));
    }
}

fn matrix_json(q: &Quantale, m: &QMatrix) -> Value {
    json!(m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|&x| q.label(x)).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn check(o: &Object) -> Result<Report, Failure> {
    let (what, violations) = match o {
        Object::Lattice(l) => (format!("lattice with {} elements", l.len()), vec![]),
        Object::Quantale(q) => (format!("quantale {} with {} elements", q.name(), q.len()), q.validate()),
        Object::QSet(a) => (
            format!("Q-set of size {} over {}", a.len(), a.quantale().name()),
            vec![],
        ),
        Object::Module(x) => (
            format!("module with {} elements over {}", x.len(), x.quantale().name()),
            x.validate(),
        ),
        Object::Groupoid(g) => (
            format!(
                "groupoid {} with {} objects and {} arrows",
                g.name,
                g.object_count(),
                g.arrow_count()
            ),
            vec![],
        ),
        Object::Action(a) => (format!("action {} with {} points", a.name, a.len()), vec![]),
    };
    let mut text = format!("{what}\n");
    for v in &violations {
        let _ = writeln!(text, "  {v}");
    }
    text.push_str(if violations.is_empty() { "valid\n" } else { "invalid\n" });
    Ok(Report {
        text,
        json: json!({"object": what, "valid": violations.is_empty(), "violations": violations_json(&violations)}),
        holds: violations.is_empty(),
    })
}

fn classify(q: &Quantale) -> Result<Report, Failure> {
    let violations = q.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidQuantale(violations[0].clone()).into());
    }
    let l = q.lattice();
    let report = q.classify();
    let mut text = format!("quantale {} ({} elements)\n", q.name(), q.len());
    let mut flags = serde_json::Map::new();
    for (flag, v) in report.flags() {
        let _ = writeln!(text, "  {:<22} {}", flag.name(), verdict_text(l, v));
        flags.insert(flag.name().into(), verdict_json(l, v));
    }
    let ladder = report.ladder_violation();
    match ladder {
        None => text.push_str("  ladder                 consistent\n"),
        Some((a, b)) => {
            let _ = writeln!(text, "  ladder                 {a} holds but {b} fails");
        }
    }
    Ok(Report {
        text,
        json: json!({
            "quantale": q.name(),
            "size": q.len(),
            "flags": flags,
            "ladder_violation": ladder.map(|(a, b)| [a.name(), b.name()]),
        }),
        holds: !report.flags().any(|(_, v)| v.is_fail()) && ladder.is_none(),
    })
}

fn complete(input: &str, strategy: StrategyArg, emit: Option<&PathBuf>) -> Result<Report, Failure> {
    let a = match io::load(input)? {
        Object::QSet(a) => a,
        o => return Err(wrong_kind("qset", &o)),
    };
    let strategy = match strategy {
        StrategyArg::Auto => Strategy::default(),
        StrategyArg::Exhaustive => Strategy::Exhaustive,
        StrategyArg::Propagate => Strategy::Propagate,
    };
    let c = completion(&a, strategy)?;
    let q = a.quantale();
    let mut text = format!("Q-set of size {} over {}\n", a.len(), q.name());
    let _ = writeln!(text, "singletons: {}", c.singletons.len());
    for (i, s) in c.singletons.iter().enumerate() {
        let _ = writeln!(text, "  {i}: ({})", labels(q.lattice(), &s.column).join(", "));
    }
    let _ = writeln!(text, "completion matrix:");
    matrix_text(&mut text, q, c.qset.matrix());
    let _ = writeln!(text, "input columns: {:?}", c.column_index);
    let _ = writeln!(text, "already complete: {}", c.is_complete);
    if let Some(path) = emit {
        write_object(path, &Object::QSet(c.qset.clone()))?;
    }
    Ok(Report {
        text,
        json: json!({
            "size": a.len(),
            "singletons": c.singletons.iter().map(|s| labels(q.lattice(), &s.column)).collect::<Vec<_>>(),
            "completion": matrix_json(q, c.qset.matrix()),
            "column_index": c.column_index,
            "relation": matrix_json(q, &c.relation),
            "is_complete": c.is_complete,
        }),
        holds: true,
    })
}

fn sections(x: &PreHilbertModule) -> Result<Report, Failure> {
    let c = x.carrier();
    let sigma = x.hilbert_sections();
    let enough = x.is_hilbert_basis(&sigma);
    let mut text = format!("module with {} elements over {}\n", x.len(), x.quantale().name());
    let _ = writeln!(text, "hilbert sections: {{{}}}", labels(c, &sigma).join(", "));
    let _ = writeln!(text, "enough sections: {}", verdict_text(c, &enough));
    let mut j = json!({
        "hilbert_sections": labels(c, &sigma),
        "enough_sections": verdict_json(c, &enough),
    });
    if x.quantale().is_stably_supported() {
        let s = module_support(x)?;
        let ql = x.quantale().lattice();
        let _ = writeln!(text, "supports: [{}]", labels(ql, &s.sup).join(", "));
        for (name, v) in ["c1", "c2", "c3", "c4"].iter().zip(s.stability()) {
            let _ = writeln!(text, "  {name} {}", verdict_text(ql, v));
        }
        let loc = local_sections(&s)?;
        let _ = writeln!(text, "local sections: {{{}}}", labels(c, &loc.local).join(", "));
        let _ = writeln!(text, "local = hilbert: {}", loc.equal);
        j["supports"] = json!(labels(ql, &s.sup));
        j["stable"] = json!(s.is_stable());
        j["local_sections"] = json!(labels(c, &loc.local));
        j["local_equals_hilbert"] = json!(loc.equal);
    }
    Ok(Report {
        text,
        json: j,
        holds: enough.holds(),
    })
}

fn basis_check(x: &PreHilbertModule, sigma: &[String]) -> Result<Report, Failure> {
    let c = x.carrier();
    let sigma = sigma
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| find(c, "carrier", s))
        .collect::<Result<Vec<_>, _>>()?;
    let basis = x.is_hilbert_basis(&sigma);
    let parseval = Verdict::from_witness(x.parseval_witness(&sigma).map(|(a, b)| vec![a, b]));
    let text = format!(
        "sigma: {{{}}}\nhilbert basis: {}\nparseval: {}\n",
        labels(c, &sigma).join(", "),
        verdict_text(c, &basis),
        verdict_text(c, &parseval)
    );
    Ok(Report {
        text,
        json: json!({
            "sigma": labels(c, &sigma),
            "hilbert_basis": verdict_json(c, &basis),
            "parseval": verdict_json(c, &parseval),
        }),
        holds: basis.holds(),
    })
}

fn point_set(a: &GroupoidAction, mask: Elem) -> String {
    let pts: Vec<&str> = (0..a.len())
        .filter(|&p| mask >> p & 1 == 1)
        .map(|p| a.points[p].as_str())
        .collect();
    format!("{{{}}}", pts.join(","))
}

fn sheafify(input: &str, emit: Option<&PathBuf>) -> Result<Report, Failure> {
    let a = match io::load(input)? {
        Object::Action(a) => a,
        o => return Err(wrong_kind("action", &o)),
    };
    let q = Arc::new(quantale_of(&a.groupoid)?);
    let m = module_from_action(&q, &a)?;
    let (_, sh) = sheafify_action(&m, DEFAULT_CARRIER_CAP)?;
    let mut text = format!("action {} of {} ({} points)\n", a.name, a.groupoid.name, a.len());
    let secs: Vec<String> = sh.sections.iter().map(|&s| point_set(&a, s)).collect();
    let _ = writeln!(text, "local sections: {}", secs.len());
    for (i, s) in secs.iter().enumerate() {
        let _ = writeln!(text, "  {i}: {s}");
    }
    let _ = writeln!(text, "matrix:");
    matrix_text(&mut text, &q, sh.qset.matrix());
    let _ = writeln!(text, "sections cover: {}", sh.sections_cover);
    let _ = writeln!(text, "partial units act on sections: {}", sh.partial_units_act);
    let _ = writeln!(text, "comparison map is an isomorphism: true");
    if let Some(path) = emit {
        write_object(path, &Object::QSet(sh.qset.clone()))?;
    }
    Ok(Report {
        text,
        json: json!({
            "action": a.name,
            "groupoid": a.groupoid.name,
            "sections": secs,
            "matrix": matrix_json(&q, sh.qset.matrix()),
            "kappa": sh.kappa,
            "sections_cover": sh.sections_cover,
            "partial_units_act": sh.partial_units_act,
        }),
        holds: sh.sections_cover.holds() && sh.partial_units_act.holds(),
    })
}

fn equivalence(groupoid: &str, actions: &[String]) -> Result<Report, Failure> {
    let g = match io::load(groupoid)? {
        Object::Groupoid(g) => g,
        o => return Err(wrong_kind("groupoid", &o)),
    };
    let acts = if actions.is_empty() {
        catalog_actions(&g)
    } else {
        let mut v = Vec::new();
        for s in actions {
            match io::load(s)? {
                Object::Action(a) if a.groupoid == g => v.push(a),
                Object::Action(a) => {
                    return Err(Failure::Input(format!("action {} is over another groupoid", a.name)));
                }
                o => return Err(wrong_kind("action", &o)),
            }
        }
        v
    };
    let r = verify_equivalence(&g, &acts)?;
    let mut text = format!("groupoid {}\n", r.groupoid);
    for p in &r.pairs {
        let _ = writeln!(
            text,
            "  {} -> {}: equivariant {} sheaf {} bijection {}",
            p.source, p.target, p.equivariant, p.sheaf_homs, p.bijection
        );
    }
    let _ = writeln!(text, "equivalence: {}", r.holds());
    Ok(Report {
        text,
        json: serde_json::to_value(&r).map_err(|e| Failure::Input(e.to_string()))?,
        holds: r.holds(),
    })
}

fn run_search(spec: &SearchSpec, out: Option<&PathBuf>) -> Result<Report, Failure> {
    let res = search(spec)?;
    res.complete(spec.budget)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for (i, q) in res.models.iter().enumerate() {
            write_object(
                &dir.join(format!("model{i}.json")),
                &Object::Quantale(Arc::new(q.clone())),
            )?;
        }
    }
    let s = &res.stats;
    let mut text = format!(
        "models: {}\ncandidates: {}  leaves: {}  invalid: {}  filtered: {}{}\n",
        res.models.len(),
        s.candidates,
        s.leaves,
        s.invalid,
        s.filtered,
        if s.limit_reached { "  (limit reached)" } else { "" }
    );
    let mut models = Vec::new();
    for q in &res.models {
        let rep = q.classify();
        let held: Vec<&str> = rep.flags().filter(|(_, v)| v.holds()).map(|(f, _)| f.name()).collect();
        let unit = q.unit().map(|e| q.label(e).to_string());
        let _ = writeln!(text, "{} unit={}", q.name(), unit.as_deref().unwrap_or("-"));
        matrix_text(
            &mut text,
            q,
            &QMatrix::from_rows(Arc::new(q.clone()), &q.mul_table()).expect("square table"),
        );
        let _ = writeln!(text, "  holds: {}", held.join(", "));
        models.push(json!({
            "name": q.name(),
            "unit": unit,
            "mul": q.mul_table().iter().map(|r| labels(q.lattice(), r)).collect::<Vec<_>>(),
            "inv": labels(q.lattice(), &q.inv_table()),
            "holds": held,
        }));
    }
    Ok(Report {
        text,
        json: json!({"stats": s, "models": models}),
        holds: !res.models.is_empty(),
    })
}

fn write_object(path: &PathBuf, o: &Object) -> Result<(), Failure> {
    let text = io::to_string(o)?;
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn catalog_cmd(entry: Option<&str>) -> Result<Report, Failure> {
    let Some(entry) = entry else {
        let list = json!({
            "quantales": catalog::QUANTALE_NAMES,
            "lattices": catalog::LATTICE_NAMES,
            "groupoids": catalog::GROUPOID_NAMES,
            "action_kinds": ["regular", "objects", "sum"],
        });
        let text = format!(
            "quantales: {}\nlattices: lattice:{}\ngroupoids: groupoid:{}\nactions: action:<groupoid>/{{regular,objects,sum}}\nmodules: module:<quantale>\nqsets: qset:<quantale>\n",
            catalog::QUANTALE_NAMES.join(" "),
            catalog::LATTICE_NAMES.join(" lattice:"),
            catalog::GROUPOID_NAMES.join(" groupoid:"),
        );
        return Ok(Report {
            text,
            json: list,
            holds: true,
        });
    };
    let obj = if entry.starts_with(io::CATALOG_PREFIX) || std::path::Path::new(entry).exists() {
        io::load(entry)?
    } else {
        io::from_catalog(&format!("{}{entry}", io::CATALOG_PREFIX))?
    };
    let text = io::to_string(&obj)?;
    let json: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(Report {
        text,
        json,
        holds: true,
    })
}
