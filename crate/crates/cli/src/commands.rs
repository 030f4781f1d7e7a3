use std::io::Write;

use bateman::algebra::oracle_spectrum;
use bateman::dynamics::{eigen_record, pairing_norm_in_time, StateEvolution};
use bateman::imaginary_scaling::is_derived_hamiltonian;
use bateman::pseudo_bogoliubov as ft;
use bateman::verify::{run_suite, Fault, Suite, VerifyConfig};
use bateman::{derive_params, Approach, Branch, PhysicalParams};
use serde::Serialize;

use crate::report::{write_csv, write_json, CheckOut, Envelope, Num};
use crate::{CliError, Command, Common, Format, SuiteArg};

const SPECTRUM_CAP: usize = 16;
const NORM_N_MAX: usize = 64;

/// Settings after flags, config file and defaults have been merged.
struct Resolved {
    params: PhysicalParams,
    n_max: usize,
    margin: usize,
    tol_scale: f64,
    format: Format,
}

fn resolve(c: &Common, default_n_max: usize) -> Result<Resolved, CliError> {
    let d = PhysicalParams::default();
    let params = derive_params(
        c.m.unwrap_or(d.m),
        c.gamma.unwrap_or(d.gamma),
        c.k.unwrap_or(d.k),
        c.hbar.unwrap_or(d.hbar),
    )?;
    let tol_scale = c.tol_scale.unwrap_or(1.0);
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tol-scale must be positive, got {tol_scale}"
        )));
    }
    let n_max = c.n_max.unwrap_or(default_n_max);
    if n_max < 2 {
        return Err(CliError::Usage(format!(
            "--n-max must be at least 2, got {n_max}"
        )));
    }
    Ok(Resolved {
        params,
        n_max,
        margin: c.margin.unwrap_or(2),
        tol_scale,
        format: c.format.unwrap_or(Format::Json),
    })
}

/// `--chi-sign` names the imaginary-scaling branch, `--branch` either one.
fn branch(c: &Common, approach: Approach) -> Result<Branch, CliError> {
    match (c.branch, c.chi_sign) {
        (Some(b), Some(s)) if b != s => Err(CliError::Usage(format!(
            "--branch {b} conflicts with --chi-sign {s}"
        ))),
        (_, Some(_)) if approach == Approach::Ft => Err(CliError::Usage(
            "--chi-sign applies to the imaginary-scaling approach only".into(),
        )),
        (b, s) => Ok(b.or(s).unwrap_or(Branch::Plus)),
    }
}

fn emit<T: Serialize>(
    c: &Common,
    r: &Resolved,
    command: &'static str,
    result: T,
    checks: Vec<CheckOut>,
    csv: (&[&str], Vec<Vec<String>>),
) -> Result<bool, CliError> {
    let passed = checks.iter().all(|c| c.passed);
    let mut buf = Vec::new();
    match r.format {
        Format::Json => {
            let env = Envelope {
                command,
                version: env!("CARGO_PKG_VERSION"),
                params: (&r.params).into(),
                n_max: r.n_max,
                margin: r.margin,
                tol_scale: Num(r.tol_scale),
                result,
                checks,
                passed,
            };
            write_json(&env, &mut buf)?;
        }
        Format::Csv => write_csv(csv.0, &csv.1, &mut buf)?,
    }
    match &c.out {
        Some(path) => std::fs::write(path, &buf)?,
        None => std::io::stdout().lock().write_all(&buf)?,
    }
    Ok(passed)
}

fn n(x: f64) -> String {
    Num(x).text()
}

pub fn run(command: &Command, c: &Common) -> Result<bool, CliError> {
    match *command {
        Command::Spectrum { approach } => spectrum(c, approach.into()),
        Command::Norms { n1, n2 } => norms(c, n1, n2),
        Command::Classify { approach, n1, n2 } => classify(c, approach.into(), n1, n2),
        Command::Evolve {
            approach,
            n1,
            n2,
            t_max,
            steps,
        } => evolve(c, approach.into(), n1, n2, t_max, steps),
        Command::Verify { suite } => verify(c, suite),
    }
}

#[derive(Serialize)]
struct Row {
    n1: usize,
    n2: usize,
    p: i64,
    q: i64,
    re: Num,
    im: Num,
    class: &'static str,
}

impl Row {
    fn csv(&self) -> Vec<String> {
        vec![
            self.n1.to_string(),
            self.n2.to_string(),
            self.p.to_string(),
            self.q.to_string(),
            n(self.re.0),
            n(self.im.0),
            self.class.into(),
        ]
    }
}

const ROW_HEADER: &[&str] = &["n1", "n2", "p", "q", "re", "im", "class"];

fn row(p: &PhysicalParams, n1: usize, n2: usize, pq: (i64, i64)) -> Row {
    let ev = p.eigen_value(pq.0, pq.1);
    Row {
        n1,
        n2,
        p: pq.0,
        q: pq.1,
        re: Num(ev.re),
        im: Num(ev.im),
        class: bateman::StabilityClass::from_imag_sign(pq.1).name(),
    }
}

#[derive(Serialize)]
struct SpectrumResult {
    approach: &'static str,
    branch: &'static str,
    n_cap: usize,
    rows: Vec<Row>,
}

fn spectrum(c: &Common, approach: Approach) -> Result<bool, CliError> {
    let r = resolve(c, 12)?;
    let b = branch(c, approach)?;
    let n_cap = c.n_cap.unwrap_or(4);
    if n_cap > SPECTRUM_CAP {
        return Err(CliError::Usage(format!(
            "--n-cap is limited to {SPECTRUM_CAP}, got {n_cap}"
        )));
    }
    let h = match approach {
        Approach::Ft => ft::ft_derived_hamiltonian(b)?,
        Approach::Is => is_derived_hamiltonian(b)?,
    };
    let oracle = oracle_spectrum(&h, n_cap, false)?;
    let mut mismatches = oracle.irregular;
    let mut rows = Vec::with_capacity(oracle.diagonal.len());
    for &(n1, n2, p, q) in &oracle.diagonal {
        let rec = eigen_record(approach, b, n1 as i64, n2 as i64, &r.params)?;
        if (rec.p, rec.q) != (p, q) {
            mismatches += 1;
        }
        rows.push(row(&r.params, n1, n2, (p, q)));
    }
    let checks = vec![CheckOut::new(
        approach.name(),
        "exact diagonal vs closed-form eigenvalues",
        if approach == Approach::Ft {
            "ft-spectrum"
        } else {
            "is-spectrum"
        },
        mismatches as f64,
        0.0,
    )];
    let csv_rows = rows.iter().map(Row::csv).collect();
    let result = SpectrumResult {
        approach: approach.name(),
        branch: b.symbol(),
        n_cap,
        rows,
    };
    emit(c, &r, "spectrum", result, checks, (ROW_HEADER, csv_rows))
}

#[derive(Serialize)]
struct NormRow {
    big_theta: Num,
    exact: Num,
    truncated: Num,
    partial_sum: Num,
    shells: usize,
    closed_form: Option<Num>,
}

#[derive(Serialize)]
struct NormsResult {
    n1: usize,
    n2: usize,
    rows: Vec<NormRow>,
    epsilon_grid: Vec<Num>,
    exponent: Num,
    expected_exponent: usize,
    asymptotic_constant: Num,
}

fn norms(c: &Common, n1: usize, n2: usize) -> Result<bool, CliError> {
    let r = resolve(c, NORM_N_MAX)?;
    let thetas = c.theta.clone().unwrap_or_else(|| vec![0.3, 0.6, 1.0, 1.4]);
    let mut rows = Vec::with_capacity(thetas.len());
    let mut checks = Vec::new();
    for &big in &thetas {
        let exact = ft::standard_norm_at(big, n1, n2)?;
        let t = ft::ft_standard_norm_truncated(big, n1, n2, r.n_max)?;
        let closed = ft::ft_norm_closed_form(big, n1, n2);
        checks.push(CheckOut::new(
            "ft",
            format!("truncated norm, T = {big}"),
            "ft-norms",
            (t.value - exact).abs() / exact,
            1e-8 * r.tol_scale,
        ));
        if let Some(cf) = closed {
            checks.push(CheckOut::new(
                "ft",
                format!("finite sum vs closed form, T = {big}"),
                "ft-norms",
                (exact - cf).abs() / cf,
                1e-12 * r.tol_scale,
            ));
        }
        rows.push(NormRow {
            big_theta: Num(big),
            exact: Num(exact),
            truncated: Num(t.value),
            partial_sum: Num(t.partial_sum),
            shells: t.shells,
            closed_form: closed.map(Num),
        });
    }
    let grid = ft::epsilon_grid();
    let exponent = ft::ft_norm_exponent_fit(&grid, n1, n2)?;
    let expected = n1 + n2 + 1;
    checks.push(CheckOut::new(
        "ft",
        "divergence exponent near T = pi/2",
        "ft-norm-divergence",
        (exponent - expected as f64).abs(),
        0.1 * r.tol_scale,
    ));
    let csv_rows = rows
        .iter()
        .map(|x| {
            vec![
                n(x.big_theta.0),
                n(x.exact.0),
                n(x.truncated.0),
                n(x.partial_sum.0),
                x.shells.to_string(),
                x.closed_form.map(|v| n(v.0)).unwrap_or_default(),
            ]
        })
        .collect();
    let result = NormsResult {
        n1,
        n2,
        rows,
        epsilon_grid: grid.into_iter().map(Num).collect(),
        exponent: Num(exponent),
        expected_exponent: expected,
        asymptotic_constant: Num(ft::ft_norm_asymptotic_constant(n1, n2)),
    };
    let header: &[&str] = &[
        "big_theta",
        "exact",
        "truncated",
        "partial_sum",
        "shells",
        "closed_form",
    ];
    emit(c, &r, "norms", result, checks, (header, csv_rows))
}

#[derive(Serialize)]
struct ClassifyResult {
    approach: &'static str,
    branch: &'static str,
    rows: Vec<Row>,
}

fn classify(
    c: &Common,
    approach: Approach,
    n1: Option<i64>,
    n2: Option<i64>,
) -> Result<bool, CliError> {
    let r = resolve(c, 12)?;
    let b = branch(c, approach)?;
    let states: Vec<(i64, i64)> = match (n1, n2) {
        (Some(a), Some(z)) => vec![(a, z)],
        (None, None) => {
            let cap = c.n_cap.unwrap_or(3) as i64;
            (0..=cap)
                .flat_map(|a| (0..=cap).map(move |z| (a, z)))
                .collect()
        }
        _ => {
            return Err(CliError::Usage(
                "give both --n1 and --n2, or neither".into(),
            ))
        }
    };
    let mut rows = Vec::with_capacity(states.len());
    for (a, z) in states {
        let rec = eigen_record(approach, b, a, z, &r.params)?;
        rows.push(row(&r.params, rec.n1, rec.n2, (rec.p, rec.q)));
    }
    let csv_rows = rows.iter().map(Row::csv).collect();
    let result = ClassifyResult {
        approach: approach.name(),
        branch: b.symbol(),
        rows,
    };
    emit(
        c,
        &r,
        "classify",
        result,
        Vec::new(),
        (ROW_HEADER, csv_rows),
    )
}

#[derive(Serialize)]
struct Sample {
    t: Num,
    re_factor: Num,
    im_factor: Num,
    abs2_factor: Num,
    pairing: Num,
}

#[derive(Serialize)]
struct EvolveResult {
    approach: &'static str,
    branch: &'static str,
    n1: i64,
    n2: i64,
    eigenvalue_re: Num,
    eigenvalue_im: Num,
    class: &'static str,
    amplitude_rate: Num,
    samples: Vec<Sample>,
}

fn evolve(
    c: &Common,
    approach: Approach,
    n1: i64,
    n2: i64,
    t_max: f64,
    steps: usize,
) -> Result<bool, CliError> {
    let r = resolve(c, 12)?;
    let b = branch(c, approach)?;
    if steps == 0 || !t_max.is_finite() {
        return Err(CliError::Usage(
            "need --steps > 0 and a finite --t-max".into(),
        ));
    }
    let ev = StateEvolution::new(approach, b, n1, n2, &r.params)?;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| t_max * i as f64 / steps as f64)
        .collect();
    let pairing = pairing_norm_in_time(approach, b, n1, n2, &grid, &r.params)?;
    let worst = pairing.iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    let samples: Vec<Sample> = grid
        .iter()
        .zip(&pairing)
        .map(|(&t, &pr)| {
            let f = ev.factor(t);
            Sample {
                t: Num(t),
                re_factor: Num(f.re),
                im_factor: Num(f.im),
                abs2_factor: Num(f.norm_sqr()),
                pairing: Num(pr),
            }
        })
        .collect();
    let checks = vec![CheckOut::new(
        approach.name(),
        "pairing norm stays one",
        "pairing-in-time",
        worst,
        0.0,
    )];
    let csv_rows = samples
        .iter()
        .map(|s| {
            vec![
                n(s.t.0),
                n(s.re_factor.0),
                n(s.im_factor.0),
                n(s.abs2_factor.0),
            ]
        })
        .collect();
    let result = EvolveResult {
        approach: approach.name(),
        branch: b.symbol(),
        n1,
        n2,
        eigenvalue_re: Num(ev.eigenvalue.re),
        eigenvalue_im: Num(ev.eigenvalue.im),
        class: ev.class().name(),
        amplitude_rate: Num(ev.amplitude_rate),
        samples,
    };
    let header: &[&str] = &["t", "re_factor", "im_factor", "abs2_factor"];
    emit(c, &r, "evolve", result, checks, (header, csv_rows))
}

#[derive(Serialize)]
struct VerifyResult {
    suite: &'static str,
    total: usize,
    failed: usize,
}

fn verify(c: &Common, suite: SuiteArg) -> Result<bool, CliError> {
    let r = resolve(c, 12)?;
    let suite = match suite {
        SuiteArg::Algebra => Suite::Algebra,
        SuiteArg::Ft => Suite::Ft,
        SuiteArg::Is => Suite::Is,
        SuiteArg::Dynamics => Suite::Dynamics,
        SuiteArg::All => Suite::All,
    };
    if r.margin >= r.n_max {
        return Err(CliError::Usage(format!(
            "--margin {} leaves no interior at --n-max {}",
            r.margin, r.n_max
        )));
    }
    let cfg = VerifyConfig {
        params: r.params,
        n_max: r.n_max,
        margin: r.margin,
        tol_scale: r.tol_scale,
        fault: c.inject_fault.then_some(Fault::CorruptCommutator),
    };
    let checks: Vec<CheckOut> = run_suite(suite, &cfg)?.iter().map(CheckOut::from).collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    let csv_rows = checks
        .iter()
        .map(|k| {
            vec![
                k.suite.clone(),
                k.name.clone(),
                k.anchor.clone(),
                n(k.deviation.0),
                n(k.tolerance.0),
                k.passed.to_string(),
            ]
        })
        .collect();
    let result = VerifyResult {
        suite: suite.name(),
        total: checks.len(),
        failed,
    };
    let header: &[&str] = &[
        "suite",
        "name",
        "anchor",
        "deviation",
        "tolerance",
        "passed",
    ];
    emit(c, &r, "verify", result, checks, (header, csv_rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_sign_only_for_imaginary_scaling() {
        let c = Common {
            chi_sign: Some(Branch::Minus),
            ..Default::default()
        };
        assert_eq!(branch(&c, Approach::Is).unwrap(), Branch::Minus);
        assert!(matches!(branch(&c, Approach::Ft), Err(CliError::Usage(_))));
        let both = Common {
            branch: Some(Branch::Plus),
            ..c
        };
        assert!(branch(&both, Approach::Is).is_err());
    }

    #[test]
    fn defaults_resolve() {
        let r = resolve(&Common::default(), 12).unwrap();
        assert_eq!((r.n_max, r.margin, r.format), (12, 2, Format::Json));
        assert!((r.params.omega - 1.0).abs() < 1e-15);
    }
}
