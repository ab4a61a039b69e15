use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use g2lts::cartan::{root_space_basis, standard_frame, RootLabel};
use g2lts::classify::classify_detailed;
use g2lts::complex::{cla_c_construct, complex_admissible, complex_maximal, positions, table_positions};
use g2lts::constructors::{
    all_descriptors, construct, container_of, containment_witness, randomize, Containment, LtsDescriptor,
};
use g2lts::embeddings::{
    build_wedge, complex_restriction, eta_invariance, geodesic_period, leibniz_defect, omega_invariance,
    real_restriction, sp3_orbit_tangent, zeta_invariance,
};
use g2lts::lts::{is_lts, rank_of, sectional_range, verify, RealSubspace};
use g2lts::model::{geodesic_at, plane_intersection_dim, sectional_curvature, Plane};
use g2lts::G2Error;
use serde::Serialize;
use serde_json::{json, Value};

const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Lib(#[from] G2Error),
    #[error("G2LTS_TOL must be a positive number, got '{0}'")]
    Tol(String),
    #[error("{0}")]
    Usage(String),
}

/// Construct, verify and classify Lie triple systems of quaternionic and
/// complex 2-Grassmannians. Every command prints one JSON document.
#[derive(Parser)]
#[command(name = "g2lts", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the standard Lie triple system of a type.
    Construct {
        /// Type, e.g. `P12:H2`, `S13:2`, `PxP:C1,H2`, `Geo:t=0.3`, `Sp2`.
        #[arg(long = "type")]
        ty: LtsDescriptor,
        #[arg(long)]
        n: usize,
        /// Move the result by a seeded random isotropy element.
        #[arg(long)]
        randomize: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closure residual, rank, restricted roots and angle range of a subspace.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Type of a Lie triple system read from a file.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Roots and multiplicities of the ambient space.
    Roots {
        #[arg(long)]
        n: usize,
    },
    /// Sectional curvature range of a constructed or stored subspace.
    Curvature {
        #[arg(long = "type", conflicts_with = "input", required_unless_present = "input")]
        ty: Option<LtsDescriptor>,
        #[arg(long, required_unless_present = "input")]
        n: Option<usize>,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dimension, rank and maximality of every type, as computed.
    Tables {
        #[arg(long)]
        n: usize,
    },
    /// Verify every containment of the inclusion table.
    Inclusions {
        #[arg(long)]
        n: usize,
    },
    /// Run the exterior cube construction and its orbit tangent spaces.
    Wedge {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Types of the complex 2-Grassmannian and their positions.
    Complex {
        #[arg(long)]
        n: usize,
    },
    /// Point of a geodesic through the base point and its intersection with it.
    Geodesic {
        /// A geodesic type `Geo:t=X`.
        #[arg(long = "type")]
        ty: LtsDescriptor,
        /// Time parameter.
        #[arg(long = "t")]
        time: f64,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

/// Compact JSON with every float printed to 17 significant digits.
struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

fn emit(v: &impl Serialize) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17);
    v.serialize(&mut ser)?;
    writeln!(out).map_err(|e| CliError::Io { path: "<stdout>".into(), source: e })?;
    Ok(())
}

fn tolerance() -> Result<f64, CliError> {
    match std::env::var("G2LTS_TOL") {
        Err(_) => Ok(DEFAULT_TOL),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::Tol(s)),
        },
    }
}

fn read_subspace(path: &Path) -> Result<RealSubspace, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), source: e })?;
    Ok(serde_json::from_str(&text)?)
}

/// Map `f` over `items` on scoped threads, keeping input order.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    std::thread::scope(|sc| {
        let handles: Vec<_> = items.iter().map(|x| sc.spawn(|| f(x))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

fn err_json(e: &G2Error) -> Value {
    json!({ "error": e.to_string() })
}

/// JSON document and whether every check passed.
type Outcome = (Value, bool);

fn run(cmd: Command) -> Result<Outcome, CliError> {
    let tol = tolerance()?;
    match cmd {
        Command::Construct { ty, n, randomize: rnd, seed } => {
            let s = construct(&ty, n)?;
            let s = if rnd { randomize(&s, seed)? } else { s };
            Ok((serde_json::to_value(&s)?, true))
        }
        Command::Verify { input, samples, seed } => {
            let s = read_subspace(&input)?;
            let r = verify(&s, tol, samples, seed)?;
            let ok = r.is_lts;
            Ok((serde_json::to_value(&r)?, ok))
        }
        Command::Classify { input } => {
            let s = read_subspace(&input)?;
            let (ok, residual) = is_lts(&s, tol);
            if !ok {
                return Ok((json!({ "is_lts": false, "residual": residual }), false));
            }
            let c = classify_detailed(&s)?;
            let mut v = serde_json::to_value(&c)?;
            v["type"] = json!(c.descriptor.to_string());
            Ok((v, true))
        }
        Command::Roots { n } => {
            let frame = standard_frame(n)?;
            let roots: Vec<Value> = RootLabel::ALL
                .iter()
                .map(|&l| {
                    let (p, q) = l.coefficients();
                    json!({
                        "label": l.name(),
                        "p": p,
                        "q": q,
                        "multiplicity": root_space_basis(&frame, l).len(),
                    })
                })
                .collect();
            let ok = RootLabel::ALL.iter().all(|&l| root_space_basis(&frame, l).len() == l.multiplicity(n));
            let mult: Vec<&Value> = roots.iter().map(|r| &r["multiplicity"]).collect();
            Ok((json!({ "n": n, "roots": roots, "multiplicities": mult }), ok))
        }
        Command::Curvature { ty, n, input, samples, seed } => {
            let s = match (input, ty, n) {
                (Some(p), _, _) => read_subspace(&p)?,
                (None, Some(t), Some(n)) => construct(&t, n)?,
                _ => return Err(CliError::Usage("curvature needs --in FILE or --type with --n".into())),
            };
            let (ok, residual) = is_lts(&s, tol);
            let (lo, hi) = sectional_range(&s, samples, seed)?;
            let e = s.basis();
            let mut pair_min = f64::INFINITY;
            for a in 0..e.len() {
                for b in a + 1..e.len() {
                    pair_min = pair_min.min(sectional_curvature(&e[a], &e[b])?);
                }
            }
            let pair_min = if pair_min.is_finite() { Some(pair_min) } else { None };
            Ok((
                json!({
                    "dim": s.dim(),
                    "is_lts": ok,
                    "residual": residual,
                    "sectional_min": lo,
                    "sectional_max": hi,
                    "basis_pair_min": pair_min,
                    "samples": samples,
                }),
                ok,
            ))
        }
        Command::Tables { n } => {
            standard_frame(n)?;
            let rows = par_map(&all_descriptors(n), |d| table_row(d, n, tol));
            let ok = rows.iter().all(|r| r.1);
            Ok((json!({ "n": n, "rows": rows.into_iter().map(|r| r.0).collect::<Vec<_>>() }), ok))
        }
        Command::Inclusions { n } => {
            standard_frame(n)?;
            let rows = par_map(&all_descriptors(n), |d| inclusion_row(d, n));
            let ok = rows.iter().all(|r| r.1);
            Ok((json!({ "n": n, "rows": rows.into_iter().map(|r| r.0).collect::<Vec<_>>() }), ok))
        }
        Command::Wedge { seed } => {
            let ws = build_wedge(seed)?;
            let orbit = sp3_orbit_tangent(&ws)?;
            let (c, r) = (complex_restriction(&ws)?, real_restriction(&ws)?);
            let ok = orbit.matches_target() && c.matches_target() && r.matches_target();
            Ok((
                json!({
                    "seed": seed,
                    "dims": ws.dims(),
                    "sp3_orbit": orbit,
                    "su3_orbit": c,
                    "so3_orbit": r,
                    "omega_invariance": omega_invariance(&ws, 20, seed),
                    "eta_invariance": eta_invariance(&ws, 20, seed),
                    "zeta_invariance": zeta_invariance(&ws, 20, seed),
                    "leibniz_defect": leibniz_defect(20, seed),
                }),
                ok,
            ))
        }
        Command::Complex { n } => {
            standard_frame(n)?;
            let rows = par_map(&all_descriptors(n), |d| complex_row(d, n, tol));
            let ok = rows.iter().all(|r| r.1);
            Ok((json!({ "n": n, "rows": rows.into_iter().map(|r| r.0).collect::<Vec<_>>() }), ok))
        }
        Command::Geodesic { ty, time, n } => {
            let LtsDescriptor::Geo { t } = ty else {
                return Err(CliError::Usage(format!("geodesic needs a type Geo:t=X, got {ty}")));
            };
            let frame = standard_frame(n)?;
            let v = frame.h_plus.scale(t.cos()).add(&frame.h_minus.scale(t.sin()));
            let plane = geodesic_at(&v, time)?;
            let dim = plane_intersection_dim(&plane, &Plane::origin(n))?;
            let period = if (0.0..=std::f64::consts::FRAC_PI_4).contains(&t) { geodesic_period(t)? } else { None };
            Ok((
                json!({
                    "type": ty.to_string(),
                    "t": time,
                    "n": n,
                    "plane": plane,
                    "intersection_dim": dim,
                    "distance_from_origin": plane.distance_from_origin(),
                    "period": period,
                }),
                true,
            ))
        }
    }
}

fn table_row(d: &LtsDescriptor, n: usize, tol: f64) -> Outcome {
    let computed = (|| -> g2lts::Result<Value> {
        let s = construct(d, n)?;
        let (closed, residual) = is_lts(&s, tol);
        let rank = rank_of(&s)?;
        let c = container_of(d, n)?;
        let ok = closed && s.dim() == d.dim() && rank == d.rank();
        Ok(json!({
            "type": d.to_string(),
            "isometry_type": d.isometry_type(),
            "dim": s.dim(),
            "rank": rank,
            "maximal": c == Containment::Maximal,
            "whole_space": c == Containment::WholeSpace,
            "is_lts": closed,
            "residual": residual,
            "ok": ok,
        }))
    })();
    match computed {
        Ok(v) => {
            let ok = v["ok"] == json!(true);
            (v, ok)
        }
        Err(e) => (json!({ "type": d.to_string(), "error": e.to_string() }), false),
    }
}

fn inclusion_row(d: &LtsDescriptor, n: usize) -> Outcome {
    match container_of(d, n) {
        Ok(Containment::Container(c)) => match containment_witness(d, n) {
            Ok(_) => (json!({ "type": d.to_string(), "container": c.to_string(), "verified": true }), true),
            Err(e) => (
                json!({ "type": d.to_string(), "container": c.to_string(), "verified": false, "error": e.to_string() }),
                false,
            ),
        },
        Ok(Containment::Maximal) => (json!({ "type": d.to_string(), "container": null, "maximal": true }), true),
        Ok(Containment::WholeSpace) => (json!({ "type": d.to_string(), "container": null, "whole_space": true }), true),
        Err(e) => {
            let mut v = err_json(&e);
            v["type"] = json!(d.to_string());
            (v, false)
        }
    }
}

fn complex_row(d: &LtsDescriptor, n: usize, tol: f64) -> Outcome {
    if let Err(e) = complex_admissible(d, n) {
        return (json!({ "type": d.to_string(), "admissible": false, "reason": e.to_string() }), true);
    }
    let computed = (|| -> g2lts::Result<Value> {
        let s = cla_c_construct(d, n)?;
        let (closed, residual) = is_lts(&s, tol);
        let p = positions(&s)?;
        let expected = table_positions(d).map(|(j, qk)| json!({ "J": j, "QK": qk }));
        let matches = table_positions(d).map(|(j, qk)| j == p.j && qk == p.qk);
        Ok(json!({
            "type": d.to_string(),
            "admissible": true,
            "dim": s.dim(),
            "is_lts": closed,
            "residual": residual,
            "maximal": complex_maximal(d, n),
            "position": p,
            "table_position": expected,
            "matches_table": matches,
        }))
    })();
    match computed {
        Ok(v) => {
            let ok = v["is_lts"] == json!(true);
            (v, ok)
        }
        Err(e) => (json!({ "type": d.to_string(), "admissible": true, "error": e.to_string() }), false),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command).and_then(|(v, ok)| emit(&v).map(|_| ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("g2lts: {e}");
            ExitCode::from(2)
        }
    }
}
