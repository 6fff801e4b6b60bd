//! One function per subcommand, each producing a rendered-ready report.

use cubesff::archdens::{SigmaEngine, WeightParams};
use cubesff::charsums::{gauss_sum, hasse_davenport_check, jacobi_sum, theorem12_certificate};
use cubesff::gf::{CubicCharacter, FieldCtx};
use cubesff::global::{density_scan, manin_report, planted_k, sa_indicator, variance, GlobalCtx};
use cubesff::localdens::{modulus_n, ResidueDensities};
use cubesff::polyring::{Poly, PolyRing, ResidueRing};
use cubesff::report::{rat, rat_string};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::output::Report;
use crate::CliError;

#[derive(Serialize)]
struct GaussRow {
    q: u32,
    p: u32,
    e: u32,
    g_re_approx: f64,
    g_im_approx: f64,
    modulus_residual_approx: f64,
    jacobi_a: String,
    jacobi_b: String,
    jacobi_norm: String,
    cube_relation_residual_approx: f64,
    hasse_davenport_max_residual_approx: f64,
}

fn gauss_row(p: u32, e: u32) -> Result<GaussRow, CliError> {
    let f = FieldCtx::new(p, e)?;
    let chi = CubicCharacter::new(&f)?;
    let g = gauss_sum(&chi).value;
    let j = jacobi_sum(&chi);
    let q = f.q() as f64;
    let mut hd = 0f64;
    let q2 = (f.q() as u64).pow(2);
    let mut d = 1;
    while q2.pow(d) <= 1 << 16 {
        hd = hd.max(hasse_davenport_check(p, e, d)?);
        d += 1;
    }
    Ok(GaussRow {
        q: f.q(),
        p,
        e,
        g_re_approx: g.re,
        g_im_approx: g.im,
        modulus_residual_approx: (g.norm_sqr() - q).abs(),
        jacobi_a: j.a.to_string(),
        jacobi_b: j.b.to_string(),
        jacobi_norm: j.norm().to_string(),
        cube_relation_residual_approx: (g * g * g - j.to_complex() * q).norm(),
        hasse_davenport_max_residual_approx: hd,
    })
}

/// Without a field: every `q = p^e = 1 mod 3` with `p in {2, 5, 7, 13}`, `q <= 2^10`.
pub fn gauss(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let fields: Vec<(u32, u32)> = match cfg.field {
        Some(f) => vec![f],
        None => {
            let mut v = Vec::new();
            for p in [2u32, 5, 7, 13] {
                let mut e = 1;
                while (p as u64).pow(e) <= 1 << 10 {
                    if (p as u64).pow(e) % 3 == 1 {
                        v.push((p, e));
                    }
                    e += 1;
                }
            }
            v
        }
    };
    let rows = fields.into_iter().map(|(p, e)| gauss_row(p, e)).collect::<Result<Vec<_>, _>>()?;
    Report::table(&rows, &rows)
}

#[derive(Serialize)]
struct CertificateJson {
    q: u64,
    #[serde(rename = "A")]
    a: f64,
    d: u32,
    #[serde(rename = "C_A")]
    c_a: String,
    m: String,
    factor: String,
    log_bound: [String; 2],
    pass: bool,
}

#[derive(Serialize)]
struct CertificateCsv {
    q: u64,
    #[serde(rename = "A")]
    a: f64,
    d: u32,
    #[serde(rename = "C_A")]
    c_a: String,
    m: String,
    factor: String,
    log_bound_lo: String,
    log_bound_hi: String,
    pass: bool,
}

pub fn certificate(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (p, e) = cfg.field()?;
    let c = theorem12_certificate(p, e, cfg.a, cfg.d_max)?;
    let j = CertificateJson {
        q: c.q,
        a: c.a,
        d: c.d,
        c_a: rat_string(&c.c_a),
        m: c.m.to_string(),
        factor: rat_string(&c.factor),
        log_bound: [rat_string(&c.log_bound.lo), rat_string(&c.log_bound.hi)],
        pass: c.pass,
    };
    let row = CertificateCsv {
        q: j.q,
        a: j.a,
        d: j.d,
        c_a: j.c_a.clone(),
        m: j.m.clone(),
        factor: j.factor.clone(),
        log_bound_lo: j.log_bound[0].clone(),
        log_bound_hi: j.log_bound[1].clone(),
        pass: j.pass,
    };
    let mut r = Report::table(&j, &[row])?;
    if !c.pass {
        r.failures.push("certificate did not pass".into());
    }
    Ok(r)
}

#[derive(Serialize)]
struct LocalRow {
    #[serde(rename = "N")]
    n: String,
    k: String,
    rho: String,
    rho_tilde_num: String,
    rho_tilde_den: String,
}

#[derive(Serialize)]
struct LocalJson<'a> {
    q: u32,
    #[serde(rename = "N")]
    n: String,
    rho6_tilde: String,
    rows: &'a [LocalRow],
}

pub fn localdensity(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (p, e) = cfg.field()?;
    let f = FieldCtx::with_seed(p, e, cfg.seed)?;
    let ring = PolyRing::new(&f);
    let mut dens = match &cfg.modulus {
        Some(s) => {
            let n = Poly::parse_coeff_string(s, f.q())?;
            if n.is_zero() {
                return Err(CliError::Config("modulus must be nonzero".into()));
            }
            ResidueDensities::new(ring, &n)?
        }
        None => ResidueDensities::from_modulus_n(ring, &modulus_n(ring, cfg.m.unwrap_or(1))?)?,
    };
    let table = dens.rho_all()?;
    let rr = ResidueRing::new(ring, dens.modulus().clone())?;
    let n_str = dens.modulus().to_coeff_string();
    let n2 = num_pow(f.q(), 2 * dens.deg() as u32);
    let rows: Vec<LocalRow> = table
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let r = rat(v, n2);
            LocalRow {
                n: n_str.clone(),
                k: rr.element(i as u64).to_coeff_string(),
                rho: v.to_string(),
                rho_tilde_num: r.numer().to_string(),
                rho_tilde_den: r.denom().to_string(),
            }
        })
        .collect();
    let j = LocalJson { q: f.q(), n: n_str.clone(), rho6_tilde: rat_string(&dens.rho6_tilde()?), rows: &rows };
    Report::table(&j, &rows)
}

fn num_pow(q: u32, e: u32) -> u128 {
    (q as u128).pow(e)
}

fn params(cfg: &ExperimentConfig) -> Result<WeightParams, CliError> {
    Ok(WeightParams::new(cfg.a, cfg.alpha, cfg.d()?)?)
}

#[derive(Serialize)]
struct SigmaRow {
    q: u32,
    #[serde(rename = "A")]
    a: f64,
    alpha: u32,
    d: u32,
    k: String,
    sigma_num: String,
    sigma_den: String,
}

pub fn sigma(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (p, e) = cfg.field()?;
    let f = FieldCtx::with_seed(p, e, cfg.seed)?;
    let pr = params(cfg)?;
    let engine = SigmaEngine::new(&f, pr, None)?;
    let ks: Vec<Poly> = match &cfg.k {
        Some(s) => vec![Poly::parse_coeff_string(s, f.q())?],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let q = f.q() as u64;
            (0..cfg.samples)
                .map(|_| {
                    let mut c: Vec<u32> = (0..pr.b()).map(|_| rng.gen_range(0..q) as u32).collect();
                    c.push(rng.gen_range(1..q) as u32);
                    Poly::from_indices(&c)
                })
                .collect()
        }
    };
    let rows = ks
        .iter()
        .map(|k| {
            let s = engine.sigma(k)?;
            Ok(SigmaRow {
                q: f.q(),
                a: pr.a(),
                alpha: pr.alpha(),
                d: pr.d(),
                k: k.to_coeff_string(),
                sigma_num: s.numer().to_string(),
                sigma_den: s.denom().to_string(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if cfg.k.is_some() {
        Report::table(&rows[0], &rows)
    } else {
        Report::table(&rows, &rows)
    }
}

#[derive(Serialize)]
struct ScanRow {
    q: u32,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: u32,
    box_degree: u32,
    members: u64,
    total: u64,
    fraction: String,
    ra_positive: Option<u64>,
    planted: u32,
    planted_found: u32,
}

pub fn scan(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (p, e) = cfg.field()?;
    let f = FieldCtx::with_seed(p, e, cfg.seed)?;
    let b_min = cfg.b_min.unwrap_or(1);
    let b_max = cfg.b_max.unwrap_or(b_min.max(6));
    if b_min > b_max {
        return Err(CliError::Config(format!("--b-min {b_min} > --b-max {b_max}")));
    }
    let bs: Vec<u32> = (b_min..=b_max).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for row in density_scan(&f, cfg.a, &bs)? {
        let hit = sa_indicator(&f, row.b, cfg.a)?;
        let base = (f.q() as u64).pow(row.b);
        let (mut planted, mut found) = (0, 0);
        for _ in 0..cfg.samples {
            if let Some((k, _)) = planted_k(&f, row.b, cfg.a, &mut rng) {
                planted += 1;
                found += hit[(k.index(f.q()) - base) as usize] as u32;
            }
        }
        if found != planted {
            failures.push(format!("B={}: planted k missed", row.b));
        }
        rows.push(ScanRow {
            q: f.q(),
            a: cfg.a,
            b: row.b,
            box_degree: row.box_degree,
            members: row.members,
            total: row.total,
            fraction: rat_string(&row.fraction),
            ra_positive: row.ra_positive,
            planted,
            planted_found: found,
        });
    }
    let mut r = Report::table(&rows, &rows)?;
    r.failures = failures;
    Ok(r)
}

#[derive(Serialize)]
struct VarianceRow {
    q: u32,
    #[serde(rename = "A")]
    a: f64,
    alpha: u32,
    d: u32,
    #[serde(rename = "B")]
    b: u32,
    #[serde(rename = "M")]
    m: u32,
    #[serde(rename = "N")]
    n: String,
    sigma1: String,
    sigma2: String,
    sigma3: String,
    var: String,
    var_direct: String,
    target: String,
    sigma2_identity: bool,
    sigma3_identity: bool,
    sigma2_hypothesis: bool,
    sigma3_hypothesis: bool,
    notes: String,
}

pub fn variance_cmd(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (p, e) = cfg.field()?;
    let f = FieldCtx::with_seed(p, e, cfg.seed)?;
    let ctx = GlobalCtx::new(&f, params(cfg)?)?;
    let rep = variance(&ctx, cfg.m.unwrap_or(0))?;
    let row = VarianceRow {
        q: rep.q,
        a: rep.params.a(),
        alpha: rep.params.alpha(),
        d: rep.params.d(),
        b: rep.b,
        m: rep.m,
        n: rep.modulus.to_coeff_string(),
        sigma1: rat_string(&rep.sigma1),
        sigma2: rat_string(&rep.sigma2),
        sigma3: rat_string(&rep.sigma3),
        var: rat_string(&rep.var),
        var_direct: rat_string(&rep.var_direct),
        target: rat_string(&rep.target),
        sigma2_identity: rep.sigma2_identity(),
        sigma3_identity: rep.sigma3_identity(),
        sigma2_hypothesis: rep.sigma2_hypothesis,
        sigma3_hypothesis: rep.sigma3_hypothesis,
        notes: rep.notes.join("; "),
    };
    let mut r = Report::table(&row, &[&row])?;
    if !rep.consistent() {
        r.failures.push("Var differs from the termwise sum or is negative".into());
    }
    if rep.sigma2_hypothesis && !rep.sigma2_equal {
        r.failures.push("Sigma2 identity failed under its hypothesis".into());
    }
    if rep.sigma3_hypothesis && !rep.sigma3_equal {
        r.failures.push("Sigma3 identity failed under its hypothesis".into());
    }
    Ok(r)
}

#[derive(Serialize)]
struct ManinRow {
    q: u32,
    #[serde(rename = "A")]
    a: f64,
    alpha: u32,
    d: u32,
    #[serde(rename = "M_max")]
    m_max: u32,
    n_w: String,
    sigma_inf: String,
    singular_partial: String,
    main: String,
    upsilon_spaces: usize,
    upsilon_sum: u64,
    upsilon_union: u64,
    residual: String,
    residual_scaled: String,
    q_hat: i64,
}

pub fn manin(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (p, e) = cfg.field()?;
    if p <= 3 {
        return Err(CliError::Config(format!("manin needs characteristic > 3, got p = {p}")));
    }
    let f = FieldCtx::with_seed(p, e, cfg.seed)?;
    let ctx = GlobalCtx::new(&f, params(cfg)?)?;
    let rep = manin_report(&ctx, cfg.m.unwrap_or(2))?;
    let row = ManinRow {
        q: rep.q,
        a: rep.params.a(),
        alpha: rep.params.alpha(),
        d: rep.params.d(),
        m_max: rep.m_max,
        n_w: rat_string(&rep.n_w),
        sigma_inf: rat_string(&rep.sigma_inf),
        singular_partial: rat_string(&rep.singular_partial),
        main: rat_string(&rep.main),
        upsilon_spaces: rep.upsilon.spaces,
        upsilon_sum: rep.upsilon.sum,
        upsilon_union: rep.upsilon.union,
        residual: rat_string(&rep.residual),
        residual_scaled: rat_string(&rep.residual_scaled),
        q_hat: rep.q_hat,
    };
    Report::table(&row, &[&row])
}

pub fn selftest(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let (p, e) = cfg.field.unwrap_or((2, 1));
    let rows = cubesff::selftest::run(p, e)?;
    let mut r = Report::table(&rows, &rows)?;
    r.failures = rows.iter().filter(|s| !s.pass).map(|s| format!("{}: {}", s.suite, s.detail)).collect();
    Ok(r)
}
