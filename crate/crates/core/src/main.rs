use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use skly3::algebra::{build_algebra, cyclic_quotient, find_central_cubic, AlgebraTable, Element, Side, SklyParams};
use skly3::elliptic::{CurvePoint, EllipticData};
use skly3::io::{read_json, read_rep, to_json_string, AnyRep};
use skly3::ktheory::{
    chi_form, class_from_hilbert, normalize_and_invariant, restriction_rank_degree, serre_pairing_check, shift_class,
    KClass,
};
use skly3::linalg::{FieldSpec, Scalar};
use skly3::moduli::{construct_ideal_rep, perturb_witness, required_max_deg, sample_dn, ConstructChoice};
use skly3::quiver::{
    euler_form_quiver, ext_dims, hom_space, line_object_rep, membership_check_dn, relation_residuals, stability_check,
    StabilityMode,
};
use skly3::{Error, Result};

/// Exact computations for the three-dimensional Sklyanin algebra and the
/// quiver model of its rank-one modules.
#[derive(Parser)]
#[command(name = "skly3", version)]
struct Cli {
    #[command(flatten)]
    job: JobArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldKind {
    Fp,
    Q,
}

#[derive(Args)]
struct JobArgs {
    /// Relation parameter a (integer or fraction).
    #[arg(long, global = true, default_value = "1", allow_hyphen_values = true)]
    a: String,
    #[arg(long, global = true, default_value = "2", allow_hyphen_values = true)]
    b: String,
    #[arg(long, global = true, default_value = "3", allow_hyphen_values = true)]
    c: String,
    /// Prime for the base field F_p.
    #[arg(long, global = true, default_value_t = 101)]
    fp: u64,
    /// Base field kind; `q` selects the rationals and ignores --fp.
    #[arg(long, global = true, value_enum, default_value = "fp")]
    field: FieldKind,
    /// Largest degree of the algebra to build.
    #[arg(long, global = true)]
    maxdeg: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Human-readable indented output instead of compact JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Graded dimensions, the central cubic, and the quotient by it.
    Algebra,
    /// The cubic form of the point scheme.
    Curve,
    /// σ and σ⁻¹ at a point.
    Sigma {
        #[arg(long)]
        point: Option<String>,
        /// Check the round trip on every rational point (finite fields).
        #[arg(long)]
        verify: bool,
        /// Also report the σ-orbit length, up to this many steps.
        #[arg(long)]
        orbit_limit: Option<usize>,
    },
    /// All rational points of the curve over F_p.
    Points {
        #[arg(long)]
        with_sigma: bool,
    },
    /// The (1,1,1) representation of a curve point.
    Pointrep {
        #[arg(long)]
        point: String,
    },
    /// The (2,1,0) representation of the line module A/Au.
    Lineobj {
        #[arg(long)]
        u: String,
    },
    /// Build and certify an explicit rank-one representation.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Also write the bare representation file here.
        #[arg(long)]
        emit_rep: Option<PathBuf>,
        /// Experimental: perturb the result and re-certify.
        #[arg(long)]
        perturb: bool,
        /// JSON list of curve points for a sampled certificate.
        #[arg(long)]
        sample_file: Option<PathBuf>,
    },
    /// Relations, membership certificate and optional stability of a rep file.
    Check {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        sample_file: Option<PathBuf>,
        #[arg(long, value_enum)]
        stability: Option<StabilityKind>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Dimension of Hom between two rep files.
    Hom {
        #[arg(long)]
        rep1: PathBuf,
        #[arg(long)]
        rep2: PathBuf,
    },
    /// Ext dimensions between two full-quiver rep files.
    Ext {
        #[arg(long)]
        rep1: PathBuf,
        #[arg(long)]
        rep2: PathBuf,
    },
    /// K-class from a Hilbert function, with shift and invariant.
    Kclass {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        dims: Vec<i64>,
        /// Degree bound for the characteristic polynomial; default len - 4.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<i64>,
    },
    /// Serre duality on the basis classes.
    SerreCheck,
    /// Euler form on dimension vectors or on K-classes.
    Euler {
        #[arg(long, value_delimiter = ',')]
        d1: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        d2: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c1: Option<Vec<i64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c2: Option<Vec<i64>>,
    },
    /// Several certified constructions from one seed.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StabilityKind {
    Exhaustive,
    Sampled,
}

impl JobArgs {
    fn field(&self) -> Result<FieldSpec> {
        match self.field {
            FieldKind::Q => Ok(FieldSpec::Rational),
            FieldKind::Fp => FieldSpec::prime(self.fp),
        }
    }

    fn params(&self) -> Result<SklyParams> {
        let f = self.field()?;
        SklyParams::new(f.parse(&self.a)?, f.parse(&self.b)?, f.parse(&self.c)?)
    }

    fn table(&self, min_deg: usize) -> Result<AlgebraTable> {
        let want = self.maxdeg.unwrap_or(min_deg.max(4));
        let deg = if want < min_deg {
            eprintln!("warning: raising --maxdeg from {want} to {min_deg}");
            min_deg
        } else {
            want
        };
        build_algebra(&self.params()?, deg)
    }

    fn elliptic(&self) -> Result<EllipticData> {
        let p = self.params()?;
        EllipticData::new(&skly3::algebra::RelationTensor::sklyanin(&p))
    }

    fn header(&self) -> Result<BTreeMap<String, Value>> {
        let p = self.params()?;
        let mut h = BTreeMap::new();
        h.insert("field".into(), serde_json::to_value(self.field()?)?);
        h.insert("params".into(), json!(p.as_array().map(|x| x.to_decimal())));
        h.insert("seed".into(), json!(self.seed));
        Ok(h)
    }
}

fn parse_triple(f: FieldSpec, s: &str) -> Result<[Scalar; 3]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!("expected three comma-separated values, got {s:?}")));
    }
    Ok([f.parse(parts[0])?, f.parse(parts[1])?, f.parse(parts[2])?])
}

fn parse_point(f: FieldSpec, s: &str) -> Result<CurvePoint> {
    CurvePoint::new(parse_triple(f, s)?)
}

fn read_points(f: FieldSpec, path: &PathBuf) -> Result<Vec<CurvePoint>> {
    let v = read_json(path)?;
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidInput("sample file must be a JSON list of points".into()))?;
    arr.iter()
        .map(|p| {
            let c = skly3::io::parse_vector(f, p)?;
            if c.len() != 3 {
                return Err(Error::InvalidInput("points have three coordinates".into()));
            }
            CurvePoint::new([c[0].clone(), c[1].clone(), c[2].clone()])
        })
        .collect()
}

fn merge(mut h: BTreeMap<String, Value>, body: Value) -> Value {
    if let Value::Object(m) = body {
        for (k, v) in m {
            h.insert(k, v);
        }
    }
    serde_json::to_value(h).unwrap()
}

fn cmd_algebra(job: &JobArgs) -> Result<Value> {
    let t = job.table(4)?;
    let g = find_central_cubic(&t)?;
    let terms: BTreeMap<String, String> = t
        .basis_words(3)
        .iter()
        .zip(&g.g.coords)
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (AlgebraTable::word_string(w), c.to_decimal()))
        .collect();
    let b = cyclic_quotient(&t, &g.g, Side::Right)?;
    Ok(json!({
        "command": "algebra",
        "max_deg": t.max_deg(),
        "dims": t.dims(),
        "central_cubic": terms,
        "central_solution_dim": g.solution_dim,
        "quotient_dims": b.dims(),
    }))
}

fn cmd_curve(job: &JobArgs) -> Result<Value> {
    let e = job.elliptic()?;
    Ok(json!({
        "command": "curve",
        "curve": {"degree": 3, "coeffs": e.cubic().coeff_map()},
    }))
}

fn cmd_sigma(job: &JobArgs, point: Option<&str>, verify: bool, orbit_limit: Option<usize>) -> Result<Value> {
    let e = job.elliptic()?;
    let f = e.field();
    let mut out = json!({"command": "sigma"});
    if let Some(p) = point {
        let p = parse_point(f, p)?;
        let s = e.sigma(&p)?;
        let si = e.sigma_inverse(&p)?;
        out["point"] = json!(p);
        out["sigma"] = json!(s);
        out["sigma_inverse"] = json!(si);
        out["round_trip"] = json!(e.sigma_inverse(&s)? == p && e.sigma(&si)? == p);
        if let Some(limit) = orbit_limit {
            out["orbit_length"] = json!(e.sigma_orbit_length(&p, limit)?);
        }
    }
    if verify {
        let pts = e.enumerate_points()?;
        let mut failures = Vec::new();
        for p in &pts {
            let ok = e.sigma_inverse(&e.sigma(p)?)? == *p && e.sigma(&e.sigma_inverse(p)?)? == *p;
            if !ok {
                failures.push(p.clone());
            }
        }
        out["verify"] = json!({"checked": pts.len(), "failures": failures, "all_pass": failures.is_empty()});
    }
    if point.is_none() && !verify {
        return Err(Error::InvalidInput("give --point or --verify".into()));
    }
    Ok(out)
}

fn cmd_points(job: &JobArgs, with_sigma: bool) -> Result<Value> {
    let e = job.elliptic()?;
    let pts = e.enumerate_points()?;
    let p = e.field().characteristic() as f64;
    let (lo, hi) = (p + 1.0 - 2.0 * p.sqrt(), p + 1.0 + 2.0 * p.sqrt());
    let count = pts.len() as f64;
    let mut out = json!({
        "command": "points",
        "count": pts.len(),
        "hasse_window": [lo.ceil() as i64, hi.floor() as i64],
        "in_window": lo <= count && count <= hi,
        "points": pts,
    });
    if with_sigma {
        let images = pts.iter().map(|q| e.sigma(q)).collect::<Result<Vec<_>>>()?;
        out["sigma"] = json!(images);
    }
    Ok(out)
}

fn cmd_pointrep(job: &JobArgs, point: &str) -> Result<Value> {
    let e = job.elliptic()?;
    let p = parse_point(e.field(), point)?;
    Ok(serde_json::to_value(e.point_rep(&p)?)?)
}

fn cmd_lineobj(job: &JobArgs, u: &str) -> Result<Value> {
    let t = build_algebra(&job.params()?, 3)?;
    let u = Element::linear(&parse_triple(t.field(), u)?);
    Ok(serde_json::to_value(line_object_rep(&t, &u)?)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    job: &JobArgs,
    n: usize,
    u: Option<&str>,
    s: Option<&str>,
    trial: u64,
    emit_rep: Option<&PathBuf>,
    perturb: bool,
    sample_file: Option<&PathBuf>,
) -> Result<Value> {
    if n == 0 {
        return Err(Error::InvariantZero);
    }
    let t = job.table(required_max_deg(n))?;
    let e = EllipticData::new(t.relations())?;
    let f = t.field();
    let u = u.map(|u| parse_triple(f, u).map(|c| Element::linear(&c))).transpose()?;
    let s = s
        .map(|s| -> Result<Element> {
            let coords = s.split(',').map(|x| f.parse(x)).collect::<Result<Vec<_>>>()?;
            Ok(Element { degree: n, coords })
        })
        .transpose()?;
    let sample = sample_file.map(|p| read_points(f, p)).transpose()?;
    let choice = ConstructChoice { u, s, sample };
    let w = construct_ideal_rep(&t, &e, n, &choice, job.seed, trial)?;
    if let Some(path) = emit_rep {
        std::fs::write(path, to_json_string(&w.rep, job.pretty)?)?;
    }
    let mut out = serde_json::to_value(&w)?;
    out["command"] = json!("construct");
    if perturb {
        let p = perturb_witness(&e, &w.rep, job.seed)?;
        out["perturbed"] = serde_json::to_value(&p)?;
    }
    Ok(out)
}

fn cmd_check(
    job: &JobArgs,
    rep: &PathBuf,
    sample_file: Option<&PathBuf>,
    stability: Option<StabilityKind>,
    samples: usize,
) -> Result<Value> {
    let r = read_rep(rep)?;
    let params = job.params()?;
    if params.field() != r.field() {
        return Err(Error::InvalidInput("rep file field differs from --fp/--field".into()));
    }
    let e = job.elliptic()?;
    let mut out = json!({"command": "check"});
    if let AnyRep::Delta(d) = &r {
        let bad: Vec<usize> = relation_residuals(e.relations(), d)?
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, _)| k)
            .collect();
        out["relations_ok"] = json!(bad.is_empty());
        out["failed_relations"] = json!(bad);
    }
    let f0 = r.to_delta0();
    let sample = sample_file.map(|p| read_points(e.field(), p)).transpose()?;
    out["certificate"] = serde_json::to_value(membership_check_dn(&e, &f0, sample.as_deref())?)?;
    if let Some(kind) = stability {
        let mode = match kind {
            StabilityKind::Exhaustive => StabilityMode::Exhaustive,
            StabilityKind::Sampled => StabilityMode::Sampled {
                samples,
                seed: job.seed,
            },
        };
        out["stability"] = serde_json::to_value(stability_check(&f0, mode)?)?;
    }
    Ok(out)
}

fn cmd_hom(rep1: &PathBuf, rep2: &PathBuf) -> Result<Value> {
    let (a, b) = (read_rep(rep1)?, read_rep(rep2)?);
    let dim = match (&a, &b) {
        (AnyRep::Delta(x), AnyRep::Delta(y)) => hom_space(x, y)?.dim,
        (AnyRep::Delta0(x), AnyRep::Delta0(y)) => hom_space(x, y)?.dim,
        _ => return Err(Error::InvalidInput("both reps must be for the same quiver".into())),
    };
    Ok(json!({"command": "hom", "hom_dim": dim}))
}

fn cmd_ext(job: &JobArgs, rep1: &PathBuf, rep2: &PathBuf) -> Result<Value> {
    let (AnyRep::Delta(a), AnyRep::Delta(b)) = (read_rep(rep1)?, read_rep(rep2)?) else {
        return Err(Error::InvalidInput("ext needs two full-quiver reps".into()));
    };
    let e = job.elliptic()?;
    let x = ext_dims(e.relations(), &a, &b)?;
    Ok(json!({"command": "ext", "ext": x}))
}

fn cmd_kclass(dims: &[i64], bound: Option<usize>, shift: Option<i64>) -> Result<Value> {
    let bound = match bound {
        Some(b) => b,
        None => dims
            .len()
            .checked_sub(4)
            .ok_or_else(|| Error::InvalidInput("need at least four dimensions".into()))?,
    };
    let c = class_from_hilbert(dims, bound)?;
    let (rank, degree) = restriction_rank_degree(c);
    let mut out = json!({"r": c.r, "a": c.a, "b": c.b, "bound": bound, "restriction": {"rank": rank, "degree": degree}});
    if let Ok((l, n)) = normalize_and_invariant(c) {
        out["normalizing_shift"] = json!(l);
        out["invariant"] = json!(n);
    }
    if let Some(l) = shift {
        out["shifted"] = serde_json::to_value(shift_class(c, l))?;
    }
    Ok(out)
}

fn triple<T: Copy>(v: &[T], what: &str) -> Result<[T; 3]> {
    v.try_into()
        .map_err(|_| Error::InvalidInput(format!("{what} needs three comma-separated values")))
}

fn cmd_euler(d1: Option<&[usize]>, d2: Option<&[usize]>, c1: Option<&[i64]>, c2: Option<&[i64]>) -> Result<Value> {
    match (d1, d2, c1, c2) {
        (Some(d1), Some(d2), None, None) => Ok(json!({
            "command": "euler",
            "value": euler_form_quiver(triple(d1, "--d1")?, triple(d2, "--d2")?),
        })),
        (None, None, Some(c1), Some(c2)) => {
            let [r1, a1, b1] = triple(c1, "--c1")?;
            let [r2, a2, b2] = triple(c2, "--c2")?;
            Ok(json!({
                "command": "euler",
                "value": chi_form(KClass::new(r1, a1, b1), KClass::new(r2, a2, b2)),
            }))
        }
        _ => Err(Error::InvalidInput("give either --d1 and --d2 or --c1 and --c2".into())),
    }
}

fn run(cli: &Cli) -> Result<Value> {
    let job = &cli.job;
    let header = job.header()?;
    let body = match &cli.command {
        Command::Algebra => cmd_algebra(job)?,
        Command::Curve => cmd_curve(job)?,
        Command::Sigma {
            point,
            verify,
            orbit_limit,
        } => cmd_sigma(job, point.as_deref(), *verify, *orbit_limit)?,
        Command::Points { with_sigma } => cmd_points(job, *with_sigma)?,
        Command::Pointrep { point } => return cmd_pointrep(job, point),
        Command::Lineobj { u } => return cmd_lineobj(job, u),
        Command::Construct {
            n,
            u,
            s,
            trial,
            emit_rep,
            perturb,
            sample_file,
        } => cmd_construct(
            job,
            *n,
            u.as_deref(),
            s.as_deref(),
            *trial,
            emit_rep.as_ref(),
            *perturb,
            sample_file.as_ref(),
        )?,
        Command::Check {
            rep,
            sample_file,
            stability,
            samples,
        } => cmd_check(job, rep, sample_file.as_ref(), *stability, *samples)?,
        Command::Hom { rep1, rep2 } => cmd_hom(rep1, rep2)?,
        Command::Ext { rep1, rep2 } => cmd_ext(job, rep1, rep2)?,
        Command::Kclass { dims, bound, shift } => cmd_kclass(dims, *bound, *shift)?,
        Command::SerreCheck => json!({"command": "serre-check", "report": serre_pairing_check()}),
        Command::Euler { d1, d2, c1, c2 } => cmd_euler(d1.as_deref(), d2.as_deref(), c1.as_deref(), c2.as_deref())?,
        Command::Sample { n, trials } => {
            let t = job.table(required_max_deg(*n))?;
            let e = EllipticData::new(t.relations())?;
            let mut v = serde_json::to_value(sample_dn(&t, &e, *n, *trials, job.seed)?)?;
            v["command"] = json!("sample");
            v
        }
    };
    Ok(merge(header, body))
}

/// Indented `key: value` rendering for `--pretty`.
fn render_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let inline = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let is_flat = |v: &Value| match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()) || a.is_empty(),
        Value::Object(_) => false,
        _ => true,
    };
    match v {
        Value::Object(m) => {
            let width = m.keys().map(String::len).max().unwrap_or(0);
            for (k, x) in m {
                if is_flat(x) {
                    let text = match x {
                        Value::Array(a) => a.iter().map(inline).collect::<Vec<_>>().join(", "),
                        other => inline(other),
                    };
                    out.push_str(&format!("{pad}{k:<width$}  {text}\n"));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_pretty(x, indent + 1, out);
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                if is_flat(x) {
                    let text = match x {
                        Value::Array(a) => a.iter().map(inline).collect::<Vec<_>>().join(", "),
                        other => inline(other),
                    };
                    out.push_str(&format!("{pad}[{i}]  {text}\n"));
                } else {
                    out.push_str(&format!("{pad}[{i}]\n"));
                    render_pretty(x, indent + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn configure_threads() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("SKLY3_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = run(&cli).and_then(|v| {
        let text = if cli.job.pretty {
            let mut s = String::new();
            render_pretty(&v, 0, &mut s);
            s
        } else {
            to_json_string(&v, false)?
        };
        match &cli.job.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
