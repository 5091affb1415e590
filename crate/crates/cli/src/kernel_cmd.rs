//! `greenquad kernel`: evaluate a kernel family over a Cartesian grid.
//!
//! CSV columns: the family's axes, then `re,im,err_estimate,flag`; singular
//! grid points carry `nan` values with `flag=singular`, unconverged
//! quadrature `flag=nonconverged`. Rows are computed in parallel and written
//! in deterministic row-major grid order.

use clap::Args;
use greenquad::kernels::{
    n_equalmu_hat, n_heisenberg_c3, n_m2, n_m2_polar, n_m3, n_mixed, n_zeroeigen, MixedComponent,
};
use greenquad::quad::{QuadratureConfig, QuadratureResult};
use greenquad::{Error, C64};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use crate::grid::{parse_axis, product, Axis};
use crate::{fmt_f64, parse_f64_list};

#[derive(Args)]
pub struct KernelArgs {
    /// Family: heisenberg-c3 | mixed | zero-eigen | m2 | m2-polar | m3 |
    /// equalmu-hat.
    #[arg(long)]
    pub family: String,
    /// σ = s1,s2 for the mixed family.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Form component for the mixed family: dz1 | dz2.
    #[arg(long, default_value = "dz1")]
    pub component: String,
    /// q ∈ {0, 2} for m2 / m3.
    #[arg(long, default_value_t = 0)]
    pub q: u8,
    /// Parameters of equalmu-hat: complex dimension n.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Parameters of equalmu-hat: positive integer J.
    #[arg(long, default_value_t = 1)]
    pub j: u32,
    /// Parameters of equalmu-hat: codimension m.
    #[arg(long, default_value_t = 1)]
    pub m_codim: u32,
    /// Parameters of equalmu-hat: |λ|.
    #[arg(long, default_value_t = 1.0)]
    pub lambda_abs: f64,
    /// Axes: a single value `v` or a range `min:max:count`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub x1: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub y1: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub x2: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub y2: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub x3: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub y3: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t1: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub t2: String,
    /// Relative quadrature tolerance override.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    pub output: Option<String>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    pub format: String,
    /// Exit 3 if any row is flagged singular or nonconverged.
    #[arg(long)]
    pub strict: bool,
    /// Also evaluate a second family on the same grid and report the
    /// maximum |difference| (families must share axes).
    #[arg(long)]
    pub diff_with: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flag {
    Ok,
    Singular,
    NonConverged,
}

impl Flag {
    fn as_str(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::Singular => "singular",
            Flag::NonConverged => "nonconverged",
        }
    }
}

#[derive(Serialize)]
struct JsonRow {
    #[serde(flatten)]
    coords: std::collections::BTreeMap<String, f64>,
    re: f64,
    im: f64,
    err_estimate: f64,
    flag: String,
}

struct Family {
    name: String,
    axes: Vec<&'static str>,
    eval: Box<dyn Fn(&[f64]) -> Result<QuadratureResult, Error> + Sync + Send>,
}

fn build_family(args: &KernelArgs, name: &str) -> Result<Family, String> {
    let cfg = {
        let mut c = QuadratureConfig::default();
        if let Some(tol) = args.rel_tol {
            if tol <= 0.0 {
                return Err("rel-tol must be positive".into());
            }
            c.rel_tol = tol;
        }
        c
    };
    let z2 = |p: &[f64]| [C64::new(p[0], p[1]), C64::new(p[2], p[3])];
    match name {
        "heisenberg-c3" => Ok(Family {
            name: name.into(),
            axes: vec!["x1", "y1", "x2", "y2", "t"],
            eval: Box::new(move |p| {
                n_heisenberg_c3(&z2(p), p[4]).map(|v| QuadratureResult::exact(C64::new(v, 0.0)))
            }),
        }),
        "mixed" => {
            let sigma = match &args.sigma {
                Some(s) => {
                    let v = parse_f64_list(s)?;
                    if v.len() != 2 {
                        return Err("--sigma needs two components".into());
                    }
                    [v[0], v[1]]
                }
                None => return Err("mixed family requires --sigma s1,s2".into()),
            };
            let component = match args.component.as_str() {
                "dz1" => MixedComponent::Dz1,
                "dz2" => MixedComponent::Dz2,
                other => return Err(format!("unknown component '{other}'")),
            };
            Ok(Family {
                name: name.into(),
                axes: vec!["x1", "y1", "x2", "y2", "t"],
                eval: Box::new(move |p| n_mixed(&z2(p), p[4], sigma, component, &cfg)),
            })
        }
        "zero-eigen" => Ok(Family {
            name: name.into(),
            axes: vec!["x1", "y1", "x2", "y2", "x3", "y3", "t"],
            eval: Box::new(move |p| {
                let z = [
                    C64::new(p[0], p[1]),
                    C64::new(p[2], p[3]),
                    C64::new(p[4], p[5]),
                ];
                n_zeroeigen(&z, p[6], &cfg)
            }),
        }),
        "m2" => {
            let q = args.q;
            Ok(Family {
                name: name.into(),
                axes: vec!["x1", "y1", "x2", "y2", "t1", "t2"],
                eval: Box::new(move |p| {
                    n_m2(&z2(p), &[p[4], p[5]], q)
                        .map(|v| QuadratureResult::exact(C64::new(v, 0.0)))
                }),
            })
        }
        "m2-polar" => Ok(Family {
            name: name.into(),
            axes: vec!["x1", "y1", "x2", "y2", "t1", "t2"],
            eval: Box::new(move |p| {
                n_m2_polar(&z2(p), &[p[4], p[5]]).map(QuadratureResult::exact)
            }),
        }),
        "m3" => {
            let q = args.q;
            Ok(Family {
                name: name.into(),
                axes: vec!["x1", "y1", "x2", "y2", "t1", "t2"],
                eval: Box::new(move |p| n_m3(&z2(p), &[p[4], p[5]], q, &cfg)),
            })
        }
        "equalmu-hat" => {
            let (n, j, m, la) = (args.n, args.j, args.m_codim, args.lambda_abs);
            if n > 3 {
                return Err("equalmu-hat grid supports n ≤ 3".into());
            }
            let axes: Vec<&'static str> = [
                "x1", "y1", "x2", "y2", "x3", "y3",
            ][..2 * n as usize]
                .to_vec();
            Ok(Family {
                name: name.into(),
                axes,
                eval: Box::new(move |p| {
                    let az: f64 = p.iter().map(|v| v * v).sum();
                    n_equalmu_hat(la * az, n, j, m, la, &cfg)
                }),
            })
        }
        other => Err(format!(
            "unknown family '{other}' (heisenberg-c3, mixed, zero-eigen, m2, m2-polar, m3, equalmu-hat)"
        )),
    }
}

fn axis_spec<'a>(args: &'a KernelArgs, name: &str) -> &'a str {
    match name {
        "x1" => &args.x1,
        "y1" => &args.y1,
        "x2" => &args.x2,
        "y2" => &args.y2,
        "x3" => &args.x3,
        "y3" => &args.y3,
        "t" => &args.t,
        "t1" => &args.t1,
        "t2" => &args.t2,
        _ => unreachable!("axis names are static"),
    }
}

pub fn run(args: &KernelArgs) -> i32 {
    match run_inner(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn run_inner(args: &KernelArgs) -> Result<i32, String> {
    let family = build_family(args, &args.family)?;
    let diff = match &args.diff_with {
        Some(name) => {
            let f = build_family(args, name)?;
            if f.axes != family.axes {
                return Err("diff-with family must share the grid axes".into());
            }
            Some(f)
        }
        None => None,
    };
    let axes: Vec<Axis> = family
        .axes
        .iter()
        .map(|name| parse_axis(name, axis_spec(args, name)))
        .collect::<Result<_, _>>()?;
    let rows = product(&axes);
    let results: Vec<(C64, f64, Flag)> = rows
        .par_iter()
        .map(|p| match (family.eval)(p) {
            Ok(r) => (
                r.value,
                r.error_estimate,
                if r.converged {
                    Flag::Ok
                } else {
                    Flag::NonConverged
                },
            ),
            Err(_) => (C64::new(f64::NAN, f64::NAN), f64::NAN, Flag::Singular),
        })
        .collect();

    let mut max_diff: Option<f64> = None;
    if let Some(other) = &diff {
        let other_results: Vec<Option<C64>> = rows
            .par_iter()
            .map(|p| (other.eval)(p).ok().map(|r| r.value))
            .collect();
        let mut worst = 0.0f64;
        for (a, b) in results.iter().zip(&other_results) {
            if let (Flag::Ok | Flag::NonConverged, Some(bv)) = (a.2, b) {
                worst = worst.max((a.0 - bv).norm());
            }
        }
        max_diff = Some(worst);
    }

    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(std::fs::File::create(path).map_err(|e| e.to_string())?),
        None => Box::new(std::io::stdout()),
    };
    match args.format.as_str() {
        "csv" => {
            let header: Vec<&str> = family
                .axes
                .iter()
                .copied()
                .chain(["re", "im", "err_estimate", "flag"])
                .collect();
            writeln!(out, "{}", header.join(",")).map_err(|e| e.to_string())?;
            for (p, (v, err, flag)) in rows.iter().zip(&results) {
                let mut cols: Vec<String> = p.iter().map(|c| fmt_f64(*c)).collect();
                cols.push(fmt_f64(v.re));
                cols.push(fmt_f64(v.im));
                cols.push(fmt_f64(*err));
                cols.push(flag.as_str().to_string());
                writeln!(out, "{}", cols.join(",")).map_err(|e| e.to_string())?;
            }
        }
        "json" => {
            let json_rows: Vec<JsonRow> = rows
                .iter()
                .zip(&results)
                .map(|(p, (v, err, flag))| JsonRow {
                    coords: family
                        .axes
                        .iter()
                        .map(|s| s.to_string())
                        .zip(p.iter().copied())
                        .collect(),
                    re: v.re,
                    im: v.im,
                    err_estimate: *err,
                    flag: flag.as_str().to_string(),
                })
                .collect();
            let doc = serde_json::json!({
                "family": family.name,
                "rows": json_rows,
                "max_diff": max_diff,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap())
                .map_err(|e| e.to_string())?;
        }
        other => return Err(format!("unknown format '{other}'")),
    }
    if let Some(d) = max_diff {
        eprintln!(
            "max |difference| vs {}: {}",
            args.diff_with.as_deref().unwrap_or(""),
            d
        );
    }
    let any_flagged = results.iter().any(|(_, _, f)| *f != Flag::Ok);
    Ok(if args.strict && any_flagged { 3 } else { 0 })
}
