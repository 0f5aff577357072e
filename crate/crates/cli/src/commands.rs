//! Command implementations. Each returns a JSON report and whether the
//! command succeeded; input problems are returned as errors.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use polydiv_core::bounds::{
    jelonek_bound, regularity_base_degree, rho_bound_general, rho_bound_smooth, BoundParams, CInf, CInfChoice,
};
use polydiv_core::division::{bound_setup, certify, solve_certificate, CertifyOptions, DivisionProblem, SolveOutcome};
use polydiv_core::resolution::{minimal_free_resolution, Resolution};
use polydiv_core::variety::projective_closure;
use polydiv_core::{groebner_basis, parse_poly, DivisionError, RatPoly, Ring};
use polydiv_kernels::checks::run_kernel_checks;
use polydiv_kernels::cpoly::CPoly;
use polydiv_kernels::represent::{division_eval_hypersurface, CurveParam};
use polydiv_kernels::{ChartPoint, KernelError, QuadratureConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::problem::ProblemFile;

pub struct Report {
    pub json: Value,
    pub success: bool,
}

impl Report {
    fn ok(json: Value) -> Self {
        Report { json, success: true }
    }

    fn failed(json: Value) -> Self {
        Report { json, success: false }
    }
}

/// Settings shared by the division commands.
#[derive(Clone, Debug, Default)]
pub struct DivisionFlags {
    pub mu0: Option<u32>,
    pub mu_prime: Option<u32>,
    pub c_inf: Option<CInfChoice>,
    pub smooth: bool,
    pub rho: Option<i64>,
}

impl DivisionFlags {
    fn options(&self, file: &ProblemFile) -> Result<CertifyOptions> {
        let mut o = CertifyOptions { smooth: self.smooth, ..Default::default() };
        o.mu0 = self.mu0.or(file.parsed_option("mu0")?).unwrap_or(0);
        o.mu_prime = self.mu_prime.or(file.parsed_option("mu_prime")?).unwrap_or(0);
        o.c_inf = match self.c_inf {
            Some(c) => c,
            None => file.parsed_option::<CInfChoice>("c_inf")?.unwrap_or_default(),
        };
        if let Some(cap) = file.parsed_option("mu0_cap")? {
            o.mu0_cap = cap;
        }
        if let Some(cap) = file.parsed_option("unknown_cap")? {
            o.unknown_cap = cap;
        }
        Ok(o)
    }
}

fn c_inf_json(c: CInf) -> Value {
    match c {
        CInf::NegInf => json!("neg-inf"),
        CInf::Finite(v) => json!(v),
    }
}

fn complex_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn resolution_json(res: &Resolution) -> Value {
    let betti: Vec<Value> = res
        .betti_numbers()
        .into_iter()
        .map(|((k, deg), count)| json!({"k": k, "degree": deg, "count": count}))
        .collect();
    let (dim, deg) = res.dimension_and_degree().map_or((Value::Null, Value::Null), |(d, g)| (json!(d), json!(g)));
    let data = res.to_json();
    json!({
        "ring": res.ring().vars(),
        "length": res.length(),
        "ranks": res.ranks(),
        "shifts": data["shifts"],
        "maps": data["maps"],
        "betti": betti,
        "kappa0": res.kappa0(),
        "regularity": serde_json::to_value(res.regularity()).expect("serializable"),
        "dimension": dim,
        "degree": deg,
        "checks": {
            "complex": res.is_complex(),
            "minimal": res.is_minimal(),
            "degrees_consistent": res.degrees_consistent(),
        },
    })
}

pub fn resolve(file: &ProblemFile) -> Result<Report> {
    file.check_options(&["projective"])?;
    let projective = file.parsed_option::<bool>("projective")?.unwrap_or(false);
    let res = if projective {
        minimal_free_resolution(&file.ring, &file.variety)?
    } else {
        projective_closure(&file.ring, &file.variety)?.resolution().clone()
    };
    Ok(Report::ok(resolution_json(&res)))
}

const BOUND_KEYS: [&str; 7] = ["d", "m", "n", "N", "deg_x", "kappa0", "deg_phi"];

pub fn bound(file: &ProblemFile, flags: &DivisionFlags) -> Result<Report> {
    let mut known: Vec<&str> = BOUND_KEYS.to_vec();
    known.extend(["mu0", "mu_prime", "c_inf", "mu0_cap", "unknown_cap"]);
    file.check_options(&known)?;
    let opts = flags.options(file)?;
    let (mut params, mut kappa0, reg) = if file.f.is_empty() {
        let need = |k: &str| -> Result<u32> {
            file.parsed_option::<u32>(k)?.ok_or_else(|| anyhow!("option `{k}` is required when no F is given"))
        };
        let c_inf = match opts.c_inf {
            CInfChoice::Fixed(c) => c,
            CInfChoice::Auto => bail!("c_inf = auto needs F; pass --c-inf or `option c_inf`"),
        };
        let params = BoundParams {
            d: need("d")?,
            m: need("m")?,
            n: need("n")?,
            big_n: need("N")?,
            deg_x: file.parsed_option("deg_x")?.unwrap_or(1),
            c_inf,
            mu0: opts.mu0,
            mu_prime: opts.mu_prime,
            deg_phi: file.parsed_option("deg_phi")?.unwrap_or(0),
        };
        (params, need("kappa0")?, None)
    } else {
        let phi = file.phi.clone().unwrap_or_else(|| RatPoly::one(&file.ring));
        let setup = bound_setup(&file.ring, &file.variety, &file.f, &phi, &opts)?;
        let reg = setup.closure.resolution().regularity();
        (setup.params, setup.kappa0, Some(reg))
    };
    for key in BOUND_KEYS {
        if let Some(v) = file.parsed_option::<u32>(key)? {
            match key {
                "d" => params.d = v,
                "m" => params.m = v,
                "n" => params.n = v,
                "N" => params.big_n = v,
                "deg_x" => params.deg_x = v as u64,
                "kappa0" => kappa0 = v,
                _ => params.deg_phi = v,
            }
        }
    }
    let general = rho_bound_general(&params, kappa0)?;
    let smooth = rho_bound_smooth(&params, kappa0)?;
    let jelonek = jelonek_bound(params.d, params.m, params.n, params.deg_x)?;
    let mut out = json!({
        "params": {
            "d": params.d, "m": params.m, "n": params.n, "N": params.big_n, "deg_x": params.deg_x,
            "c_inf": c_inf_json(params.c_inf), "mu": params.mu(), "mu0": params.mu0,
            "mu_prime": params.mu_prime, "deg_phi": params.deg_phi,
        },
        "kappa0": kappa0,
        "general": serde_json::to_value(general).expect("serializable"),
        "smooth": serde_json::to_value(smooth).expect("serializable"),
        "jelonek": jelonek,
    });
    if let Some(reg) = reg {
        out["regularity"] = serde_json::to_value(reg).expect("serializable");
        out["regularity_base"] = json!(regularity_base_degree(params.d, params.m, params.n, reg.castelnuovo_mumford));
        out["kappa0_minus_n_le_reg_minus_1"] =
            json!(kappa0 as i64 - params.big_n as i64 <= reg.castelnuovo_mumford as i64 - 1);
    }
    Ok(Report::ok(out))
}

fn certificate_report(
    result: Result<polydiv_core::division::Certificate, DivisionError>,
    extra: impl FnOnce(&mut Value, i64),
) -> Result<Report> {
    match result {
        Ok(cert) => {
            let mut out = cert.to_json();
            out["status"] = json!(if cert.verified { "verified" } else { "unverified" });
            out["formula"] =
                cert.bound_trace.map_or(Value::Null, |b| serde_json::to_value(b.formula_tag).expect("tag"));
            extra(&mut out, cert.rho_used);
            Ok(if cert.verified { Report::ok(out) } else { Report::failed(out) })
        }
        Err(DivisionError::EscalationExhausted { last_rho, last_mu0 }) => Ok(Report::failed(json!({
            "status": "infeasible",
            "last_rho": last_rho,
            "last_mu0": last_mu0,
            "message": "no certificate within the degree bounds tried; this does not show non-membership",
        }))),
        Err(DivisionError::TooManyUnknowns { unknowns, cap }) => Ok(Report::failed(json!({
            "status": "too-large",
            "unknowns": unknowns,
            "cap": cap,
        }))),
        Err(e) => Err(e.into()),
    }
}

fn run_division(
    file: &ProblemFile,
    phi: &RatPoly,
    flags: &DivisionFlags,
    extra: impl FnOnce(&mut Value, i64),
) -> Result<Report> {
    file.check_options(&["mu0", "mu_prime", "c_inf", "mu0_cap", "unknown_cap"])?;
    if file.f.is_empty() {
        bail!("no F given");
    }
    let opts = flags.options(file)?;
    if let Some(rho) = flags.rho {
        let p = DivisionProblem {
            ring: file.ring.clone(),
            v_gens: file.variety.clone(),
            f: file.f.clone(),
            phi: phi.clone(),
            rho,
        };
        return match solve_certificate(&p, opts.unknown_cap) {
            Ok(SolveOutcome::Found(c)) => certificate_report(Ok(c), extra),
            Ok(SolveOutcome::Infeasible { rho }) => Ok(Report::failed(json!({
                "status": "infeasible",
                "rho": rho,
                "message": "no certificate of this degree; this does not show non-membership",
            }))),
            Err(e) => certificate_report(Err(e), extra),
        };
    }
    certificate_report(certify(&file.ring, &file.variety, &file.f, phi, &opts), extra)
}

pub fn divide(file: &ProblemFile, flags: &DivisionFlags) -> Result<Report> {
    let phi = file.phi.clone().ok_or_else(|| anyhow!("divide needs `phi: ...;`"))?;
    run_division(file, &phi, flags, |_, _| {})
}

pub fn nullsatz(file: &ProblemFile, flags: &DivisionFlags) -> Result<Report> {
    if file.phi.is_some() {
        bail!("nullsatz solves sum F_j Q_j = 1; remove the phi statement or use divide");
    }
    let one = RatPoly::one(&file.ring);
    let jelonek = if file.f.is_empty() {
        None
    } else {
        let closure = projective_closure(&file.ring, &file.variety)?;
        let d = file.f.iter().filter_map(RatPoly::total_degree).max().unwrap_or(0).max(1);
        Some(jelonek_bound(d, file.f.len() as u32, closure.dim().max(1), closure.degree())?)
    };
    run_division(file, &one, flags, |out, rho| {
        if let Some(j) = jelonek {
            out["jelonek"] = json!(j);
            out["within_jelonek"] = json!(rho <= j);
        }
    })
}

pub fn kernel_check(seed: u64) -> Result<Report> {
    let report = run_kernel_checks(seed)?;
    let json = serde_json::to_value(&report)?;
    Ok(if report.passed { Report::ok(json) } else { Report::failed(json) })
}

fn parse_param(text: &str, line: usize) -> Result<CurveParam> {
    let r = Ring::grevlex(["u", "v"]);
    let forms = text
        .split(',')
        .map(|s| parse_poly(s, &r))
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("line {line}: option `param`"))?;
    CurveParam::new(&forms).with_context(|| format!("line {line}: option `param`"))
}

pub fn kernel_divide(file: &ProblemFile, cfg: &QuadratureConfig, seed: u64) -> Result<Report> {
    file.check_options(&["param", "points", "rho", "radius"])?;
    if file.ring.nvars() != 3 {
        bail!("kernel-divide works on plane curves: declare three homogeneous coordinates");
    }
    let [a] = file.variety.as_slice() else {
        bail!("kernel-divide needs exactly one `variety:` equation, the curve");
    };
    if file.f.is_empty() {
        bail!("no F given");
    }
    if !a.is_homogeneous() || file.f.iter().any(|f| !f.is_homogeneous()) {
        bail!("the curve and the F_j must be homogeneous");
    }
    let ring = &file.ring;
    let partials: Vec<RatPoly> = (0..3).map(|i| a.derivative(i)).collect();
    if !no_projective_zero(ring, &partials)? {
        bail!("the curve {a} is singular");
    }
    let mut on_curve = file.f.clone();
    on_curve.push(a.clone());
    if !no_projective_zero(ring, &on_curve)? {
        bail!("the F_j have a common zero on the curve");
    }
    let param = match file.option("param") {
        Some(text) => parse_param(text, file.option_line("param"))?,
        None => CurveParam::conic(),
    };
    let d = file.f[0].total_degree().unwrap_or(0);
    let kappa0 = a.total_degree().unwrap_or(0);
    let min_rho = (d * file.f.len().min(2) as u32 + kappa0).saturating_sub(2);
    let (phi, rho) = match &file.phi {
        Some(p) => (p.clone(), p.total_degree().unwrap_or(0)),
        None => {
            let rho = file.parsed_option::<u32>("rho")?.unwrap_or(min_rho);
            (RatPoly::var(&file.ring, 0).pow(rho), rho)
        }
    };
    let count = file.parsed_option::<usize>("points")?.unwrap_or(20);
    let radius = file.parsed_option::<f64>("radius")?.unwrap_or(2.0);
    let fc: Vec<CPoly> = file.f.iter().map(CPoly::new).collect();
    let phic = CPoly::new(&phi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(count);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let t = Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        let z = ChartPoint::new(param.point(0, t))?;
        let q = match division_eval_hypersurface(&file.f, &phi, a, &z, rho, &param, cfg) {
            Ok(q) => q,
            Err(e @ KernelError::NonConvergence { .. }) => {
                return Ok(Report::failed(json!({"status": "non-convergence", "message": e.to_string()})))
            }
            Err(e) => return Err(e.into()),
        };
        let lhs: Complex64 = fc.iter().zip(&q.value).map(|(f, qj)| f.eval(z.coords()) * qj).sum();
        let want = phic.eval(z.coords());
        let residual = (lhs - want).norm() / want.norm().max(1.0);
        worst = worst.max(residual);
        rows.push(json!({
            "z": z.coords().iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
            "q": q.value.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
            "error": q.error,
            "cells": q.cells,
            "residual": residual,
        }));
    }
    Ok(Report::ok(json!({
        "rho": rho,
        "phi": phi.to_string(),
        "config": serde_json::to_value(cfg)?,
        "points": rows,
        "max_residual": worst,
    })))
}

/// Whether homogeneous `gens` have no common zero in projective space, i.e.
/// generate an ideal containing a power of every variable.
fn no_projective_zero(ring: &std::sync::Arc<Ring>, gens: &[RatPoly]) -> Result<bool> {
    Ok(groebner_basis(ring, gens, ring.order())?.has_pure_power_of_every_variable())
}

/// Reads a quadrature configuration file, or the default with `tol = 1e-10`.
pub fn load_config(path: Option<&std::path::Path>) -> Result<QuadratureConfig> {
    let cfg = match path {
        None => QuadratureConfig { tol: 1e-10, ..Default::default() },
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
    };
    cfg.validate()?;
    Ok(cfg)
}
