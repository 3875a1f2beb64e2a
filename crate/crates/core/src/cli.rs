//! The `kanweigh` batch front end: one JSON report per invocation.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::cat::{opposite, FinCat};
use crate::cauchy::{
    cauchy_completion, default_samples, isbell_adjunction_check, isbell_transform, retract_search, IsbellInput,
};
use crate::cert;
use crate::closure::{closure_iterate, saturation_member, Closure, WeightClass, Witness};
use crate::doc::{self, Loader};
use crate::error::{Error, Limits, Result, Violation, DEFAULT_MAX_CANDIDATES};
use crate::promod::{compose_modules, has_right_adjoint, rext, rlift, Module};
use crate::setfun::SetFunctor;
use crate::weighted::{
    commutation_search, commutes_at, is_flat_finlim, verify_colimit, verify_limit, weighted_colimit, weighted_limit,
    UniversalCheck,
};

#[derive(Parser, Debug)]
#[command(
    name = "kanweigh",
    version,
    about = "Exact weighted (co)limits, modules and completions over finite categories"
)]
struct Cli {
    /// Cap on candidates examined by any single search.
    #[arg(long, global = true, env = "KANWEIGH_MAX_CANDIDATES", default_value_t = DEFAULT_MAX_CANDIDATES)]
    max_candidates: u64,
    /// Largest set size in bounded enumerations and universal-property checks.
    #[arg(long, global = true, default_value_t = 2)]
    max_set_size: usize,
    /// Number of closure stages.
    #[arg(long, global = true, default_value_t = 2)]
    depth: usize,
    /// Use the opposite of the `--category` input.
    #[arg(long, global = true)]
    op: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add wall-clock time to the report. Makes output non-reproducible.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a document (category, functor, set functor, weight, diagram, module or certificate).
    Validate {
        path: PathBuf,
        /// Treat the document as a certificate and re-verify it.
        #[arg(long)]
        certificate: bool,
    },
    /// Weighted limit `{ψ, T}`.
    Limit(WeightDiagram),
    /// Weighted colimit `φ ∗ S`.
    Colimit(WeightDiagram),
    /// Compare `φ ∗ {ψ, S}` with `{ψ, φ ∗ S}`.
    Commute(Commute),
    /// Flatness of a colimit weight, via filteredness of its category of elements.
    Flat {
        #[arg(long)]
        weight: PathBuf,
    },
    /// Decide whether a module has a right adjoint.
    Adjoint {
        #[arg(long)]
        module: PathBuf,
    },
    /// Compose modules: `mod-compose G F` is `G∘F`.
    ModCompose { g: PathBuf, f: PathBuf },
    /// Right lifting of `h` through `g`.
    Rlift {
        #[arg(long)]
        through: PathBuf,
        #[arg(long)]
        of: PathBuf,
    },
    /// Right Kan extension of `h` along `f`.
    Rext {
        #[arg(long)]
        along: PathBuf,
        #[arg(long)]
        of: PathBuf,
    },
    /// Cauchy completion by splitting idempotents.
    Cauchy {
        #[arg(long)]
        category: PathBuf,
    },
    /// Isbell transforms and the adjunction check.
    Isbell(Isbell),
    /// Closure of the representables under colimits with the given weights.
    Closure {
        #[arg(long)]
        category: PathBuf,
        #[arg(long, num_args = 0..)]
        weights: Vec<PathBuf>,
        /// Presheaf to look for among the elements.
        #[arg(long)]
        member: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct WeightDiagram {
    #[arg(long)]
    weight: PathBuf,
    #[arg(long)]
    diagram: PathBuf,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["at", "search"])))]
struct Commute {
    #[arg(long)]
    colimit_weight: PathBuf,
    #[arg(long)]
    limit_weight: PathBuf,
    /// A functor on `op(K) × L`.
    #[arg(long)]
    at: Option<PathBuf>,
    #[arg(long)]
    search: bool,
    /// Defaults to `--max-set-size`.
    #[arg(long, requires = "search")]
    max_size: Option<usize>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("what").required(true).args(["presheaf", "copresheaf", "check"])))]
struct Isbell {
    #[arg(long)]
    category: PathBuf,
    #[arg(long)]
    presheaf: Option<PathBuf>,
    #[arg(long)]
    copresheaf: Option<PathBuf>,
    #[arg(long)]
    check: bool,
    /// Sample grid bound: presheaves and copresheaves with at most this many elements.
    #[arg(long, default_value_t = 4)]
    max_total: usize,
}

struct Ctx {
    loader: Loader,
    limits: Limits,
    max_set_size: usize,
    depth: usize,
    op: bool,
    certificates: Vec<Value>,
}

impl Ctx {
    fn category(&mut self, path: &Path) -> Result<Arc<FinCat>> {
        let c = self.loader.category_file(path)?;
        Ok(Arc::new(if self.op { opposite(&c) } else { c }))
    }
}

/// What to print and the exit status.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    /// Usage errors only; reports always go to `stdout` or `--out`.
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (program name first), runs the command and renders the report.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    stdout: text,
                    ..Output::default()
                },
                _ => Output {
                    stderr: text,
                    code: 1,
                    ..Output::default()
                },
            };
        }
    };
    let out = cli.out.clone();
    let (report, code) = report(&cli, &args);
    let text = doc::canonical(&report);
    match out {
        Some(path) => match std::fs::write(&path, &text) {
            Ok(()) => Output {
                code,
                ..Output::default()
            },
            Err(e) => Output {
                stdout: doc::canonical(&json!({
                    "status": "invalid",
                    "result": {"valid": false, "error": format!("cannot write {}: {e}", path.display())},
                })),
                code: 1,
                ..Output::default()
            },
        },
        None => Output {
            stdout: text,
            code,
            ..Output::default()
        },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Limit(_) => "limit",
        Command::Colimit(_) => "colimit",
        Command::Commute(_) => "commute",
        Command::Flat { .. } => "flat",
        Command::Adjoint { .. } => "adjoint",
        Command::ModCompose { .. } => "mod-compose",
        Command::Rlift { .. } => "rlift",
        Command::Rext { .. } => "rext",
        Command::Cauchy { .. } => "cauchy",
        Command::Isbell(_) => "isbell",
        Command::Closure { .. } => "closure",
    }
}

fn violations_json(vs: &[Violation]) -> Value {
    vs.iter().map(|v| json!({"law": v.law, "witness": v.witness})).collect()
}

fn report(cli: &Cli, args: &[OsString]) -> (Value, i32) {
    let started = Instant::now();
    let mut ctx = Ctx {
        loader: Loader::new(),
        limits: Limits::with_max_candidates(cli.max_candidates),
        max_set_size: cli.max_set_size,
        depth: cli.depth,
        op: cli.op,
        certificates: Vec::new(),
    };
    let outcome = dispatch(&cli.command, &mut ctx);
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut r = Map::new();
    r.insert(
        "command".into(),
        json!({"name": command_name(&cli.command), "argv": argv}),
    );
    r.insert("inputs".into(), json!(ctx.loader.digests));
    r.insert(
        "caps".into(),
        json!({"max_candidates": cli.max_candidates, "max_set_size": cli.max_set_size, "depth": cli.depth}),
    );
    let code = match outcome {
        Ok((result, code)) => {
            r.insert("status".into(), Value::from("computed"));
            r.insert("result".into(), result);
            code
        }
        Err(Error::CapExceeded { cap, limit }) => {
            r.insert("status".into(), Value::from("cap_exceeded"));
            r.insert("cap".into(), json!({"name": cap, "limit": limit}));
            r.insert("result".into(), Value::Null);
            2
        }
        Err(Error::Internal(msg)) => {
            r.insert("status".into(), Value::from("internal_error"));
            r.insert("error".into(), Value::from(msg));
            r.insert("result".into(), Value::Null);
            3
        }
        Err(Error::Invalid(vs)) => {
            r.insert("status".into(), Value::from("invalid"));
            r.insert(
                "result".into(),
                json!({"valid": false, "violations": violations_json(&vs)}),
            );
            1
        }
        Err(e) => {
            r.insert("status".into(), Value::from("invalid"));
            r.insert("result".into(), json!({"valid": false, "error": e.to_string()}));
            1
        }
    };
    r.insert("certificates".into(), Value::Array(ctx.certificates));
    if cli.timing {
        r.insert("wall_time_ms".into(), Value::from(started.elapsed().as_millis() as u64));
    }
    (Value::Object(r), code)
}

fn universal_json(u: &UniversalCheck) -> Value {
    json!({
        "holds": u.holds,
        "scale": u.scale,
        "competitors": u.competitors,
        "witness": u.witness,
        "bound": format!("verified at scale {}", u.scale),
    })
}

fn sizes_matrix(m: &Module) -> Value {
    let (na, nb) = (m.source().n_objects(), m.target().n_objects());
    (0..nb)
        .map(|b| (0..na).map(|a| m.size(b, a)).collect::<Vec<_>>())
        .collect()
}

fn module_result(m: &Module) -> Value {
    json!({"module": doc::module_json(m), "sizes": sizes_matrix(m)})
}

fn witness_json(c: &Closure, w: &Witness) -> Value {
    match w {
        Witness::Representable(b) => json!({"representable": c.category.object_name(*b)}),
        Witness::Colimit { weight, values, arrows } => {
            let shape = opposite(c.class.weights()[*weight].domain());
            let arrows: Map<String, Value> = (0..shape.n_morphisms())
                .filter(|&f| !shape.is_identity(f))
                .map(|f| {
                    let from = &c.elements[values[shape.src(f)]].presheaf;
                    let to = &c.elements[values[shape.tgt(f)]].presheaf;
                    (shape.morphism_name(f).to_string(), doc::nat_json(&arrows[f], from, to))
                })
                .collect();
            json!({"weight": weight, "values": values, "arrows": arrows})
        }
    }
}

fn closure_json(c: &Closure, limits: &Limits) -> Result<Value> {
    let mut elements = Vec::with_capacity(c.elements.len());
    for (i, e) in c.elements.iter().enumerate() {
        elements.push(json!({
            "index": i,
            "stage": e.stage,
            "sizes": e.presheaf.sizes(),
            "presheaf": doc::set_functor_json(&e.presheaf),
            "witness": witness_json(c, &e.witness),
            "replays": c.replay(i, limits)?.is_some(),
        }));
    }
    Ok(json!({"depth": c.depth, "fixpoint": c.fixpoint, "elements": elements}))
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<(Value, i32)> {
    let limits = ctx.limits;
    let computed = |v: Value| Ok((v, 0));
    match cmd {
        Command::Validate { path, certificate } => validate(path, *certificate, ctx),
        Command::Limit(wd) => {
            let psi = ctx.loader.weight_file(&wd.weight)?;
            let t = ctx.loader.diagram_file(&wd.diagram)?;
            let inst = weighted_limit(&psi, &t, &limits)?;
            let check = verify_limit(&inst, ctx.max_set_size, &limits)?;
            computed(json!({
                "object": doc::set_functor_json(inst.object()),
                "sizes": inst.object().sizes(),
                "elements_of_weight": inst.elements.category.n_objects(),
                "universal": universal_json(&check),
            }))
        }
        Command::Colimit(wd) => {
            let phi = ctx.loader.weight_file(&wd.weight)?;
            let s = ctx.loader.diagram_file(&wd.diagram)?;
            let inst = weighted_colimit(&phi, &s)?;
            let check = verify_colimit(&inst, ctx.max_set_size, &limits)?;
            computed(json!({
                "object": doc::set_functor_json(inst.object()),
                "sizes": inst.object().sizes(),
                "elements_of_weight": inst.elements.category.n_objects(),
                "universal": universal_json(&check),
            }))
        }
        Command::Commute(c) => {
            let phi = ctx.loader.weight_file(&c.colimit_weight)?;
            let psi = ctx.loader.weight_file(&c.limit_weight)?;
            if let Some(at) = &c.at {
                let s = ctx.loader.set_functor_file(at)?;
                let v = commutes_at(&phi, &psi, &s, &limits)?;
                ctx.certificates.push(cert::comparison(&phi, &psi, &s, &v));
                return computed(json!({
                    "colimit_of_limits": v.colimit_of_limits,
                    "limit_of_colimits": v.limit_of_colimits,
                    "invertible": v.invertible,
                    "witness": v.witness,
                }));
            }
            let bound = c.max_size.unwrap_or(ctx.max_set_size);
            let out = commutation_search(&phi, &psi, bound, &limits)?;
            let counterexample = match &out.counterexample {
                Some((s, v)) => {
                    ctx.certificates.push(cert::comparison(&phi, &psi, s, v));
                    json!({
                        "diagram": doc::set_functor_json(s),
                        "diagram_sizes": s.sizes(),
                        "colimit_of_limits": v.colimit_of_limits,
                        "limit_of_colimits": v.limit_of_colimits,
                        "witness": v.witness,
                    })
                }
                None => Value::Null,
            };
            let verdict = if out.counterexample.is_some() {
                "counterexample".to_string()
            } else {
                format!("no counterexample with sets of at most {bound} elements")
            };
            computed(json!({
                "bound": bound,
                "checked": out.checked,
                "verdict": verdict,
                "counterexample": counterexample,
            }))
        }
        Command::Flat { weight } => {
            let phi = ctx.loader.weight_file(weight)?;
            let v = is_flat_finlim(&phi)?;
            computed(json!({"flat": v.flat, "witness": v.witness}))
        }
        Command::Adjoint { module } => {
            let f = ctx.loader.module_file(module)?;
            let v = has_right_adjoint(&f, &limits)?;
            if let (true, Some(c)) = (v.adjoint, &v.certificate) {
                ctx.certificates.push(cert::adjunction(&f, &v.lifting, c, &limits)?);
            }
            let refutation = v.refutation.as_ref().map(|(a, c, p)| {
                json!({
                    "a": f.source().object_name(*a),
                    "c": f.source().object_name(*c),
                    "source_sizes": p.source_sizes,
                    "target_sizes": p.target_sizes,
                    "witness": p.witness,
                })
            });
            computed(json!({
                "adjoint": v.adjoint,
                "right_adjoint": v.adjoint.then(|| doc::module_json(&v.lifting)),
                "lifting_sizes": sizes_matrix(&v.lifting),
                "formula_check": v.formula_check,
                "respect_failure": v.respect_failure,
                "refutation": refutation,
            }))
        }
        Command::ModCompose { g, f } => {
            let g = ctx.loader.module_file(g)?;
            let f = ctx.loader.module_file(f)?;
            computed(module_result(&compose_modules(&g, &f, &limits)?.module))
        }
        Command::Rlift { through, of } => {
            let g = ctx.loader.module_file(through)?;
            let h = ctx.loader.module_file(of)?;
            computed(module_result(&rlift(&g, &h, &limits)?.module))
        }
        Command::Rext { along, of } => {
            let f = ctx.loader.module_file(along)?;
            let h = ctx.loader.module_file(of)?;
            computed(module_result(&rext(&f, &h, &limits)?.module))
        }
        Command::Cauchy { category } => {
            let b = ctx.category(category)?;
            let q = cauchy_completion(&b, &limits)?;
            let c = &q.category;
            let n = c.n_objects();
            let hom_sizes: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| c.hom(i, j).len()).collect()).collect();
            ctx.certificates.push(cert::equivalence(&q.equivalence));
            for r in &q.retracts {
                let w = retract_search(r, &limits)?
                    .ok_or_else(|| Error::Internal("split idempotent is not a retract of a representable".into()))?;
                ctx.certificates.push(cert::retract(r, &w));
            }
            computed(json!({
                "objects": c.objects(),
                "hom_sizes": hom_sizes,
                "category": doc::category_json(c),
                "idempotents": q.idempotents.iter().map(|&e| b.morphism_name(e)).collect::<Vec<_>>(),
                "embedding_fully_faithful": q.embedding.is_fully_faithful(),
            }))
        }
        Command::Isbell(i) => {
            let b = ctx.category(&i.category)?;
            let input = match (&i.presheaf, &i.copresheaf) {
                (Some(p), _) => Some(IsbellInput::Presheaf(ctx.loader.set_functor_file(p)?)),
                (_, Some(q)) => Some(IsbellInput::Copresheaf(ctx.loader.set_functor_file(q)?)),
                _ => None,
            };
            if let Some(input) = input {
                let t = isbell_transform(&b, &input, &limits)?;
                let side = match input {
                    IsbellInput::Presheaf(_) => "O",
                    IsbellInput::Copresheaf(_) => "Spec",
                };
                return computed(json!({
                    "transform": side,
                    "value": doc::set_functor_json(&t.value),
                    "sizes": t.value.sizes(),
                }));
            }
            let (ps, qs) = default_samples(&b, i.max_total, &limits)?;
            let check = isbell_adjunction_check(&b, &ps, &qs, &limits)?;
            let units = |us: &[(usize, bool)]| -> Value {
                us.iter()
                    .map(|&(k, inv)| json!({"sample": k, "invertible": inv}))
                    .collect()
            };
            let failures: Vec<Value> = check
                .pairs
                .iter()
                .filter(|p| !p.bijective)
                .map(|p| json!({"presheaf": p.presheaf, "copresheaf": p.copresheaf, "left": p.left, "right": p.right}))
                .collect();
            computed(json!({
                "holds": check.holds,
                "bound": format!("samples with at most {} elements", i.max_total),
                "samples": {
                    "presheaves": ps.iter().map(SetFunctor::sizes).collect::<Vec<_>>(),
                    "copresheaves": qs.iter().map(SetFunctor::sizes).collect::<Vec<_>>(),
                },
                "pairs_checked": check.pairs.len(),
                "pair_failures": failures,
                "presheaf_units": units(&check.presheaf_units),
                "copresheaf_units": units(&check.copresheaf_units),
                "witness": check.witness,
            }))
        }
        Command::Closure {
            category,
            weights,
            member,
        } => {
            let b = ctx.category(category)?;
            let ws = weights
                .iter()
                .map(|w| ctx.loader.weight_file(w))
                .collect::<Result<Vec<_>>>()?;
            let class = WeightClass::new(ws)?;
            let depth = ctx.depth;
            let (closure, membership) = match member {
                Some(p) => {
                    let psi = ctx.loader.set_functor_file(p)?;
                    let m = saturation_member(&psi, &class, &b, depth, &limits)?;
                    let verdict = match (&m.found, m.stage()) {
                        (Some((i, iso)), Some(stage)) => {
                            ctx.certificates
                                .push(cert::iso(&m.closure.elements[*i].presheaf, &psi, iso));
                            json!({"found": true, "element": i, "stage": stage,
                                   "verdict": format!("member at stage {stage}")})
                        }
                        _ => {
                            let verdict = if m.closure.fixpoint {
                                format!("not in the closure (fixpoint reached at stage {})", m.closure.depth)
                            } else {
                                format!("not found by depth {depth}")
                            };
                            json!({"found": false, "verdict": verdict})
                        }
                    };
                    (m.closure, Some(verdict))
                }
                None => (closure_iterate(&class, &b, depth, &limits)?, None),
            };
            let mut result = closure_json(&closure, &limits)?;
            if let Some(v) = membership {
                result["membership"] = v;
            }
            computed(result)
        }
    }
}

fn validate(path: &Path, certificate: bool, ctx: &mut Ctx) -> Result<(Value, i32)> {
    let (v, base) = ctx.loader.read(path)?;
    let has = |k: &str| v.get(k).is_some();
    if certificate || has("kind") {
        let kind = v.get("kind").and_then(Value::as_str).unwrap_or_default().to_string();
        return Ok(match cert::verify(&v, &ctx.limits)? {
            Ok(()) => (json!({"valid": true, "kind": "certificate", "certificate": kind}), 0),
            Err(x) => (
                json!({"valid": false, "kind": "certificate", "certificate": kind, "violations": violations_json(&[x])}),
                1,
            ),
        });
    }
    let summary = if has("objects") {
        let c = ctx.loader.category(&v, &base)?;
        json!({"kind": "category", "objects": c.n_objects(), "morphisms": c.n_morphisms()})
    } else if has("target") {
        let f = ctx.loader.functor(&v, &base)?;
        json!({"kind": "functor", "source_objects": f.source().n_objects(), "target_objects": f.target().n_objects()})
    } else if has("variance") {
        let w = ctx.loader.weight_file(path)?;
        json!({"kind": "weight", "variance": w.variance().as_str(), "sizes": w.functor().sizes()})
    } else if has("shape") || has("fiber") {
        let d = ctx.loader.diagram_file(path)?;
        json!({"kind": "diagram", "shape_objects": d.shape().n_objects(), "fiber_objects": d.fiber().n_objects()})
    } else if v.get("source").and_then(|s| s.get("product")).is_some() {
        let m = ctx.loader.module_file(path)?;
        json!({"kind": "module", "sizes": sizes_matrix(&m)})
    } else if has("source") {
        let f = ctx.loader.set_functor(&v, &base)?;
        json!({"kind": "set-functor", "sizes": f.sizes()})
    } else {
        return Err(Error::Malformed("unrecognised document".into()));
    };
    let mut result = summary;
    result["valid"] = Value::Bool(true);
    Ok((result, 0))
}
