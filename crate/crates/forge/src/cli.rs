//! The `segal-forge` command line.
//!
//! Every command writes one document to `out`: JSON reports carry the
//! [`Manifest`] that produced them, DOT output carries it as a comment.
//! Exit codes: 0 pass, 1 a check failed, 2 bad input.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use segal_core::alg::{restrict_over, AlgChain};
use segal_core::grothendieck::DeltaChain;
use segal_core::hall::{self, IncidenceElement};
use segal_core::lax::{build_alpha, describe, face_degeneracy_action};
use segal_core::segal::{self, associator_delta, product_verdict, AssociatorCheck, SegalReport, Verdict};
use segal_core::sset::{glue, nerve_cat, nerve_poset, standard_simplex, Identification, SSet};

use crate::corpus;
use crate::dot;
use crate::json::{parse, ChainDoc, Diagram, FinMapDoc, FormatError, FunctionDoc, Manifest, SSetDoc, FORMAT};

#[derive(Debug, Parser)]
#[command(name = "segal-forge", version, about = "Build simplicial sets and check 2-Segal conditions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DataEmit {
    Json,
    Summary,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphEmit {
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Dk,
    Gkt,
    Both,
    #[value(name = "1segal")]
    OneSegal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HallOp {
    Convolve,
    Comult,
    Mobius,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nerve of a poset or finite category, truncated at `--dim`.
    Nerve {
        diagram: PathBuf,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_enum, default_value = "json")]
        emit: DataEmit,
    },
    /// The standard simplex Δ^n, truncated at `--dim`.
    Simplex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value = "json")]
        emit: DataEmit,
    },
    /// Standard simplices glued along faces, e.g.
    /// `--simplex 2 --simplex 2 --identify 0:0,2=1:0,1`.
    Glue {
        #[arg(long = "simplex", required = true)]
        simplices: Vec<usize>,
        /// `a:v,…=b:w,…`: vertices `v,…` of simplex `a` onto `w,…` of simplex `b`.
        #[arg(long)]
        identify: Vec<String>,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_enum, default_value = "json")]
        emit: DataEmit,
    },
    /// Check the 2-Segal conditions (or the 1-Segal condition).
    #[command(name = "check2segal")]
    Check2Segal {
        file: PathBuf,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, value_enum, default_value = "both")]
        form: FormArg,
        /// All subdivision squares rather than the generating ones.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Associator check for a chain in Alg, or for all small monotone chains.
    AssocCheck {
        sset: PathBuf,
        chain: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_fiber: usize,
        #[arg(long, default_value_t = 3)]
        max_chain: usize,
    },
    /// Build the pyramid of α for a chain in Alg over a chain of operators.
    Alpha {
        chain: PathBuf,
        /// JSON list of monotone maps `[[…], …]`, the first into `[n]`.
        #[arg(long, default_value = "[]")]
        phi: String,
        #[arg(long, value_enum, default_value = "json")]
        emit: GraphEmit,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Incidence-algebra operations on functions `X₁ → ℚ`.
    Hall {
        sset: PathBuf,
        #[arg(long, value_enum)]
        op: HallOp,
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        g: Option<PathBuf>,
    },
    /// Render a poset or finite category as DOT.
    ExportDot { diagram: PathBuf },
    /// Run the built-in consistency checks on a seeded corpus.
    SelfTest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search random cell complexes for one that is 2-Segal but not 1-Segal.
    SearchFixture {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        attempts: usize,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{file}: {source}")]
    Format { file: String, source: FormatError },
    #[error("{0}")]
    Core(#[from] segal_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{file}: {source}")]
    Io { file: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(segal_core::Error::Validation(_) | segal_core::Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// What a command produced: the text to print and whether its checks passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn pass(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.text.as_bytes());
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Nerve { diagram, dim, emit } => nerve(&diagram, dim, emit),
        Command::Simplex { n, dim, emit } => {
            if n > dim {
                return Err(CliError::Usage(format!("Δ^{n} needs --dim at least {n}")));
            }
            let m = manifest("simplex", &[], bounds([("n", json!(n)), ("dim", json!(dim))]), emit_name(emit), None);
            Ok(Outcome::pass(emit_sset(&standard_simplex(n, dim), m, emit)))
        }
        Command::Glue { simplices, identify, dim, emit } => {
            let ids = identify.iter().map(|s| parse_identification(s)).collect::<CliResult<Vec<_>>>()?;
            let g = glue(&simplices, &ids, dim)?;
            let m = manifest(
                "glue",
                &[],
                bounds([("simplices", json!(simplices)), ("identify", json!(identify)), ("dim", json!(dim))]),
                emit_name(emit),
                None,
            );
            Ok(Outcome::pass(emit_sset(g.apex(), m, emit)))
        }
        Command::Check2Segal { file, max_dim, form, exhaustive } => check2segal(&file, max_dim, form, exhaustive),
        Command::AssocCheck { sset, chain, max_fiber, max_chain } => assoc_check(&sset, chain.as_deref(), max_fiber, max_chain),
        Command::Alpha { chain, phi, emit, dim } => alpha(&chain, &phi, emit, dim),
        Command::Hall { sset, op, f, g } => hall_op(&sset, op, f.as_deref(), g.as_deref()),
        Command::ExportDot { diagram } => export_dot(&diagram),
        Command::SelfTest { seed } => self_test(seed),
        Command::SearchFixture { seed, attempts, dim } => search_fixture(seed, attempts, dim),
    }
}

fn bounds<const N: usize>(items: [(&str, Value); N]) -> BTreeMap<String, Value> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn manifest(command: &str, inputs: &[&Path], bounds: BTreeMap<String, Value>, output: &str, seed: Option<u64>) -> Manifest {
    Manifest {
        command: command.into(),
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        bounds,
        output: output.into(),
        seed,
    }
}

fn emit_name(e: DataEmit) -> &'static str {
    match e {
        DataEmit::Json => "json",
        DataEmit::Summary => "summary",
    }
}

fn report(m: &Manifest, passed: Option<bool>, result: Value) -> String {
    let mut doc = json!({ "format": FORMAT, "kind": "report", "manifest": m, "result": result });
    if let Some(p) = passed {
        doc["passed"] = json!(p);
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("reports serialize");
    text.push('\n');
    text
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { file: path.display().to_string(), source })
}

fn in_file<T>(path: &Path, r: Result<T, FormatError>) -> CliResult<T> {
    r.map_err(|source| CliError::Format { file: path.display().to_string(), source })
}

fn load_sset(path: &Path) -> CliResult<SSet> {
    let text = read(path)?;
    in_file(path, parse::<SSetDoc>(&text).and_then(|d| d.to_sset()))
}

fn load_chain(path: &Path) -> CliResult<AlgChain> {
    let text = read(path)?;
    in_file(path, parse::<ChainDoc>(&text).and_then(|d| d.to_chain()))
}

fn load_function(path: &Path, x: &SSet) -> CliResult<IncidenceElement> {
    let text = read(path)?;
    in_file(path, FunctionDoc::parse(&text).and_then(|d| d.to_element(x.level(1))))
}

fn emit_sset(x: &SSet, m: Manifest, emit: DataEmit) -> String {
    match emit {
        DataEmit::Json => {
            let mut doc = SSetDoc::from_sset(x);
            doc.manifest = Some(m);
            let mut text = serde_json::to_string_pretty(&doc).expect("documents serialize");
            text.push('\n');
            text
        }
        DataEmit::Summary => {
            let join = |v: Vec<usize>| v.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
            format!(
                "level sizes: {}\nnondegenerate: {}\n",
                join(x.sizes()),
                join(x.nondegenerate_counts())
            )
        }
    }
}

fn nerve(path: &Path, dim: usize, emit: DataEmit) -> CliResult<Outcome> {
    let text = read(path)?;
    let diagram: Diagram = in_file(path, parse(&text))?;
    let x = match in_file(path, diagram.to_poset())? {
        Some(p) => nerve_poset(&p, dim),
        None => nerve_cat(&in_file(path, diagram.to_category())?, dim),
    };
    let m = manifest("nerve", &[path], bounds([("dim", json!(dim))]), emit_name(emit), None);
    Ok(Outcome::pass(emit_sset(&x, m, emit)))
}

fn parse_identification(s: &str) -> CliResult<Identification> {
    let bad = || CliError::Usage(format!("--identify {s:?}: expected a:v,…=b:w,…"));
    let side = |t: &str| -> CliResult<(usize, Vec<usize>)> {
        let (k, vs) = t.split_once(':').ok_or_else(bad)?;
        let k = k.trim().parse().map_err(|_| bad())?;
        let vs = vs.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect::<CliResult<Vec<usize>>>()?;
        Ok((k, vs))
    };
    let (l, r) = s.split_once('=').ok_or_else(bad)?;
    Ok(Identification { left: side(l)?, right: side(r)? })
}

fn segal_json(r: &SegalReport) -> Value {
    let form = match r.form {
        segal::Form::Dk => "dk",
        segal::Form::Gkt => "gkt",
        segal::Form::OneSegal => "1segal",
    };
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            json!({
                "condition": v.condition.name(),
                "n": v.n,
                "params": v.params,
                "domain": v.domain,
                "pullback": v.pullback,
                "injective": v.injective,
            })
        })
        .collect();
    json!({ "form": form, "max_n": r.max_n, "passed": r.passed, "checked": r.checked, "violations": violations })
}

fn check2segal(path: &Path, max_dim: Option<usize>, form: FormArg, exhaustive: bool) -> CliResult<Outcome> {
    let x = load_sset(path)?;
    let max_n = max_dim.unwrap_or(x.dim());
    let mut reports = Vec::new();
    if matches!(form, FormArg::Dk | FormArg::Both) {
        reports.push(segal::check_2segal_dk(&x, max_n, exhaustive)?);
    }
    if matches!(form, FormArg::Gkt | FormArg::Both) {
        reports.push(segal::check_2segal_gkt(&x, max_n)?);
    }
    if form == FormArg::OneSegal {
        reports.push(segal::check_1segal(&x, max_n)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    let agree = reports.iter().all(|r| r.passed == reports[0].passed);
    let form_name = form.to_possible_value().expect("not skipped").get_name().to_string();
    let m = manifest(
        "check2segal",
        &[path],
        bounds([("max_dim", json!(max_n)), ("form", json!(form_name)), ("exhaustive", json!(exhaustive))]),
        "json",
        None,
    );
    let result = json!({ "forms": reports.iter().map(segal_json).collect::<Vec<_>>(), "forms_agree": agree });
    Ok(Outcome { text: report(&m, Some(passed), result), passed })
}

fn delta_json(check: &AssociatorCheck) -> Value {
    json!({
        "chain": ChainDoc::from_chain(&check.chain),
        "delta": FinMapDoc::from_map(&check.delta),
        "domain": check.delta_domain_size,
        "codomain": check.delta_codomain_size,
        "bijective": check.bijective,
    })
}

fn assoc_check(path: &Path, chain: Option<&Path>, max_fiber: usize, max_chain: usize) -> CliResult<Outcome> {
    let x = load_sset(path)?;
    let Some(chain_path) = chain else {
        let cert = segal::check_algebra(&x, max_fiber, max_chain)?;
        let m = manifest(
            "assoc-check",
            &[path],
            bounds([("max_fiber", json!(max_fiber)), ("max_chain", json!(max_chain))]),
            "json",
            None,
        );
        let result = json!({
            "chains": cert.chains,
            "pairs": cert.pairs,
            "witness": cert.witness.as_ref().map(delta_json),
        });
        return Ok(Outcome { text: report(&m, Some(cert.holds), result), passed: cert.holds });
    };
    let c = load_chain(chain_path)?;
    if c.len() < 2 {
        return Err(CliError::Usage(format!("{}: the associator needs at least two morphisms", chain_path.display())));
    }
    // Every composable pair of composites, split over the points of the target.
    let mut pairs = Vec::new();
    let mut witness = None;
    let mut passed = true;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            for k in j + 1..=c.len() {
                let (p, q) = (c.composite(i, j)?, c.composite(j, k)?);
                let mut factors = Vec::new();
                let mut fibres = Vec::new();
                for z in q.target().iter() {
                    let (pz, qz) = restrict_over(&p, &q, z)?;
                    let check = associator_delta(&x, &pz, &qz)?;
                    factors.push(Verdict { bijective: check.bijective, codomain_empty: check.delta_codomain_size == 0 });
                    fibres.push(json!({
                        "over": z,
                        "domain": check.delta_domain_size,
                        "codomain": check.delta_codomain_size,
                        "bijective": check.bijective,
                    }));
                    if !check.bijective && witness.is_none() {
                        let mut w = delta_json(&check);
                        w["pair"] = json!([i, j, k]);
                        w["over"] = json!(z);
                        witness = Some(w);
                    }
                }
                let bijective = product_verdict(&factors).bijective;
                passed &= bijective;
                pairs.push(json!({ "pair": [i, j, k], "bijective": bijective, "fibres": fibres }));
            }
        }
    }
    let m = manifest("assoc-check", &[path, chain_path], BTreeMap::new(), "json", None);
    let result = json!({ "pairs": pairs, "witness": if passed { Value::Null } else { witness.unwrap_or(Value::Null) } });
    Ok(Outcome { text: report(&m, Some(passed), result), passed })
}

/// All faces and degeneracies of `[k]`, as monotone vertex lists.
fn cofaces(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > 0 {
        for i in 0..=k {
            out.push((0..=k).filter(|&v| v != i).collect());
        }
    }
    for i in 0..=k {
        let mut s: Vec<usize> = (0..=k).collect();
        s.insert(i, i);
        out.push(s);
    }
    out
}

fn alpha(path: &Path, phi: &str, emit: GraphEmit, dim: Option<usize>) -> CliResult<Outcome> {
    let chain = load_chain(path)?;
    let maps: Vec<Vec<usize>> = in_file(Path::new("--phi"), parse(phi))?;
    let phi_chain = DeltaChain::from_maps(chain.len(), maps.clone())?;
    let dim = dim.unwrap_or_else(|| chain.max_object().max(1));
    let a = build_alpha(&chain, &phi_chain, dim)?;
    let emit_name = match emit {
        GraphEmit::Json => "json",
        GraphEmit::Dot => "dot",
    };
    let m = manifest("alpha", &[path], bounds([("phi", json!(maps)), ("dim", json!(dim))]), emit_name, None);
    if let GraphEmit::Dot = emit {
        let comment = serde_json::to_string(&m).expect("manifests serialize");
        return Ok(Outcome::pass(dot::pyramid(&a, Some(&format!("manifest: {comment}")))));
    }
    let mut actions = Vec::new();
    for gamma in cofaces(phi_chain.len()) {
        let b = face_degeneracy_action(&a, &gamma)?;
        actions.push(json!({ "gamma": gamma, "reindexed": b.reindexed_domain().len() }));
    }
    let g = a.pyramid();
    let n = g.poset().len();
    let mut objects = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            objects.insert(format!("[{i};{j}]"), json!(g.object(i, j).nondegenerate_counts()));
        }
    }
    let result = json!({
        "description": describe(&a),
        "pyramid": objects,
        "grothendieck": a.grothendieck().poset.elements().labels(),
        "reindexed_domain": a.reindexed_domain().len(),
        "coherence": true,
        "vertical_constancy": true,
        "face_degeneracy_actions": actions,
    });
    Ok(Outcome::pass(report(&m, Some(true), result)))
}

fn element_json(f: &IncidenceElement) -> Value {
    json!(FunctionDoc::from_element(f).values)
}

fn need<'a>(p: Option<&'a Path>, flag: &str) -> CliResult<&'a Path> {
    p.ok_or_else(|| CliError::Usage(format!("this --op needs --{flag}")))
}

fn hall_op(path: &Path, op: HallOp, f: Option<&Path>, g: Option<&Path>) -> CliResult<Outcome> {
    let x = load_sset(path)?;
    let zeta = || IncidenceElement::zeta(x.level(1).clone());
    let mut inputs = vec![path];
    let result = match op {
        HallOp::Convolve => {
            let (fp, gp) = (need(f, "f")?, need(g, "g")?);
            inputs.extend([fp, gp]);
            let h = hall::convolve(&x, &load_function(fp, &x)?, &load_function(gp, &x)?)?;
            json!({ "op": "convolve", "value": element_json(&h) })
        }
        HallOp::Comult => {
            let fp = need(f, "f")?;
            inputs.push(fp);
            let d = hall::comultiply(&x, &load_function(fp, &x)?)?;
            let terms: BTreeMap<String, String> = d
                .coeffs
                .iter()
                .map(|(&(a, b), c)| (format!("{}|{}", x.level(1).label(a), x.level(1).label(b)), crate::json::rational_string(c)))
                .collect();
            json!({ "op": "comult", "value": terms })
        }
        HallOp::Mobius => {
            let base = match f {
                Some(fp) => {
                    inputs.push(fp);
                    load_function(fp, &x)?
                }
                None => zeta(),
            };
            let mu = hall::mobius_invert(&x, &base)?;
            json!({ "op": "mobius", "value": element_json(&mu) })
        }
    };
    let op_name = match op {
        HallOp::Convolve => "convolve",
        HallOp::Comult => "comult",
        HallOp::Mobius => "mobius",
    };
    let m = manifest("hall", &inputs, bounds([("op", json!(op_name))]), "json", None);
    Ok(Outcome::pass(report(&m, None, result)))
}

fn export_dot(path: &Path) -> CliResult<Outcome> {
    let text = read(path)?;
    let diagram: Diagram = in_file(path, parse(&text))?;
    let m = manifest("export-dot", &[path], BTreeMap::new(), "dot", None);
    let comment = format!("manifest: {}", serde_json::to_string(&m).expect("manifests serialize"));
    let out = match in_file(path, diagram.to_poset())? {
        Some(p) => dot::poset(&p, Some(&comment)),
        None => dot::category(&in_file(path, diagram.to_category())?, Some(&comment)),
    };
    Ok(Outcome::pass(out))
}

fn self_test(seed: u64) -> CliResult<Outcome> {
    let mut checks: Vec<(String, bool)> = Vec::new();
    let members = corpus::standard_corpus(seed)?;
    let checker = segal::AlgebraChecker::new(3, 3)?;
    let mut agree = 0;
    for member in members.iter().take(60) {
        let dk = segal::check_2segal_dk(&member.x, 3, false)?.passed;
        let gkt = segal::check_2segal_gkt(&member.x, 3)?.passed;
        let alg = checker.check(&member.x)?.holds;
        if dk == gkt && gkt == alg {
            agree += 1;
        }
    }
    checks.push((format!("dk, gkt and algebra agree on {agree}/60 corpus members"), agree == 60));
    let sizes = standard_simplex(2, 3).sizes();
    checks.push((format!("Δ² level sizes {sizes:?}"), sizes == [3, 6, 10, 15]));
    let broken = corpus::square(3)?;
    let fails = !segal::check_2segal_dk(&broken, 3, false)?.passed && !segal::check_algebra(&broken, 3, 2)?.holds;
    checks.push(("glued square fails 2-Segal and associativity".into(), fails));
    let passed = checks.iter().all(|(_, ok)| *ok);
    let m = manifest("self-test", &[], bounds([("corpus_members", json!(60)), ("max_dim", json!(3))]), "json", Some(seed));
    let result: Vec<Value> = checks.iter().map(|(name, ok)| json!({ "check": name, "passed": ok })).collect();
    Ok(Outcome { text: report(&m, Some(passed), json!(result)), passed })
}

fn search_fixture(seed: u64, attempts: usize, dim: usize) -> CliResult<Outcome> {
    let found = corpus::search_two_segal_not_one_segal(seed, attempts, dim)?;
    let m = manifest("search-fixture", &[], bounds([("attempts", json!(attempts)), ("dim", json!(dim))]), "json", Some(seed));
    match found {
        Some((attempt, x)) => {
            let mut m = m;
            m.bounds.insert("found_at".into(), json!(attempt));
            Ok(Outcome::pass(emit_sset(&x, m, DataEmit::Json)))
        }
        None => Ok(Outcome { text: report(&m, Some(false), json!({ "found": false })), passed: false }),
    }
}
