//! The named experiments behind `run --scenario`.

use std::fmt::Write as _;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{key, Key, Kind, Params};
use super::report::Report;
use crate::cylindrical::{
    cartesian_history_to_polar, jacobian_log_weight, polar_to_cart, solve_cartesian, solve_polar, sup_deviation,
    CentralPotential, PolarOptions, PolarSources, PolarState, SourceConvention,
};
use crate::dynamics::{
    decompose_action, evolve_action_angle, fluctuation_green, from_action_angle, log_log_slope, poisson_bracket,
    rescale_sources, shell, solve_newton, to_action_angle, DeviationField, Integrator, RetardedKernel, TimeGrid,
};
use crate::error::{Error, Result};
use crate::potential::Polynomial;
use crate::spectral::{
    find_peaks, level_count, probe_r, proper_time_r, solve_spectrum, unitarity_residual, Domain, Grid, ProbeConfig,
    Spectrum,
};
use crate::zerodim::{borel_resum, pairing_expand, probability_thimble, series_r, CubicModel, PairingSeries};

/// A runnable experiment.
pub struct Scenario {
    pub name: &'static str,
    pub keys: &'static [Key],
    run: fn(&Params, u64, &mut Report) -> Result<()>,
}

impl Scenario {
    pub fn run(&self, params: &Params, seed: u64, report: &mut Report) -> Result<()> {
        (self.run)(params, seed, report)
    }
}

pub fn find(name: &str) -> Option<&'static Scenario> {
    SCENARIOS.iter().find(|s| s.name == name)
}

pub fn names() -> Vec<&'static str> {
    SCENARIOS.iter().map(|s| s.name).collect()
}

pub static SCENARIOS: [Scenario; 10] = [
    Scenario { name: "zerodim-series", keys: &SERIES_KEYS, run: zerodim_series },
    Scenario { name: "zerodim-borel", keys: &BOREL_KEYS, run: zerodim_borel },
    Scenario { name: "spectral-probe", keys: &PROBE_KEYS, run: spectral_probe },
    Scenario { name: "proper-time", keys: &PROPER_TIME_KEYS, run: proper_time },
    Scenario { name: "unitarity", keys: &UNITARITY_KEYS, run: unitarity },
    Scenario { name: "action-decomposition", keys: &DECOMPOSITION_KEYS, run: action_decomposition },
    Scenario { name: "green-kernel", keys: &GREEN_KEYS, run: green_kernel },
    Scenario { name: "action-angle", keys: &ACTION_ANGLE_KEYS, run: action_angle },
    Scenario { name: "response-equivalence", keys: &RESPONSE_KEYS, run: response_equivalence },
    Scenario { name: "polar-equivalence", keys: &POLAR_KEYS, run: polar_equivalence },
];

fn csv_line(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.12e}")).collect::<Vec<_>>().join(",")
}

fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::invalid("a", "must be finite"))
}

const SERIES_KEYS: [Key; 5] = [
    key("a", Kind::Positive, "1"),
    key("b", Kind::Positive, "0.1"),
    key("n_max", Kind::Count, "8"),
    key("pairing_order", Kind::Count, "8"),
    key("runtime_limit", Kind::Positive, "1"),
];

fn zerodim_series(p: &Params, _seed: u64, report: &mut Report) -> Result<()> {
    let start = Instant::now();
    let model = CubicModel::real(p.float("a"), p.float("b"))?;
    let series = series_r(&model, p.count("n_max").max(2));
    let mut buf = Vec::new();
    series.write_csv(&mut buf)?;
    report.file("coefficients.csv", String::from_utf8_lossy(&buf).into_owned());

    let z = BigRational::new(2.into(), 3.into());
    let c = &series.coefficients;
    report.require("c0 equals 1", c[0].is_one());
    report.require("c1 z equals -10 b^4/a^6", &c[1] * &z == BigRational::from_integer((-10).into()));
    report.require("c2 z^2 equals 2310 b^8/a^12", &c[2] * &z * &z == BigRational::from_integer(2310.into()));
    report.require("signs alternate", series.alternates());

    let order = p.count("pairing_order");
    let a = rational(model.a_re)?;
    let sigma = BigRational::new((-1).into(), 2.into());
    let delta = pairing_expand(&PairingSeries::delta_measure_form(&a, order as u32), &sigma, order)?;
    let phase = pairing_expand(&PairingSeries::stationary_phase_form(&a, order as u32), &sigma, order)?;
    let mut csv = String::from("order,delta_measure,stationary_phase\n");
    for (k, (x, y)) in delta.iter().zip(&phase).enumerate() {
        let _ = writeln!(csv, "{k},{x},{y}");
    }
    report.file("pairing.csv", csv);
    report.require("pairing routes agree exactly", delta == phase);
    if order >= 4 {
        let a6 = num_traits::pow(a.clone(), 6);
        report.require("pairing b^4 term equals c1 z / a^6", delta[4] == &c[1] * &z / &a6);
    }
    if order >= 8 {
        let a12 = num_traits::pow(a, 12);
        report.require("pairing b^8 term equals c2 z^2 / a^12", delta[8] == &c[2] * &z * &z / &a12);
    }
    report.check("runtime seconds", start.elapsed().as_secs_f64(), p.float("runtime_limit"));
    Ok(())
}

const BOREL_KEYS: [Key; 5] = [
    key("a", Kind::Positive, "1"),
    key("b_values", Kind::FloatList, "0.05,0.1"),
    key("n_max", Kind::Count, "24"),
    key("tolerance", Kind::Positive, "1e-6"),
    key("runtime_limit", Kind::Positive, "10"),
];

fn zerodim_borel(p: &Params, _seed: u64, report: &mut Report) -> Result<()> {
    let start = Instant::now();
    let mut csv = String::from("b,z,thimble,borel,error_estimate,superasymptotic\n");
    for b in p.list("b_values") {
        let model = CubicModel::real(p.float("a"), b)?;
        let z = model.expansion_variable();
        let series = series_r(&model, p.count("n_max"));
        let thimble = probability_thimble(&model)?;
        let borel = borel_resum(&series, z)?;
        let _ = writeln!(
            csv,
            "{}",
            csv_line(&[b, z, thimble, borel.value, borel.error_estimate, series.superasymptotic_sum(z)])
        );
        report.check(format!("borel vs thimble at b={b}"), (borel.value - thimble).abs(), p.float("tolerance"));
    }
    report.file("borel.csv", csv);
    report.check("runtime seconds", start.elapsed().as_secs_f64(), p.float("runtime_limit"));
    Ok(())
}

const SPECTRUM_KEYS: [Key; 5] = [
    key("k2", Kind::Float, "1"),
    key("k4", Kind::Float, "0"),
    key("half_width", Kind::Positive, "10"),
    key("grid_points", Kind::Count, "1200"),
    key("levels", Kind::Count, "8"),
];

fn spectrum(p: &Params) -> Result<Spectrum> {
    let v = Polynomial { k2: p.float("k2"), k3: 0.0, k4: p.float("k4"), half_width: p.float("half_width") };
    solve_spectrum(&v, p.count("levels"), p.count("grid_points"))
}

fn levels_file(s: &Spectrum) -> Result<String> {
    let mut buf = Vec::new();
    s.write_levels_csv(&mut buf)?;
    Ok(String::from_utf8_lossy(&buf).into_owned())
}

const PROBE_KEYS: [Key; 15] = [
    SPECTRUM_KEYS[0],
    SPECTRUM_KEYS[1],
    SPECTRUM_KEYS[2],
    SPECTRUM_KEYS[3],
    SPECTRUM_KEYS[4],
    key("epsilon", Kind::Float, "0"),
    key("e_min", Kind::Float, "0"),
    key("e_max", Kind::Float, "5"),
    key("samples", Kind::Count, "2001"),
    key("peak_tolerance_fraction", Kind::Positive, "0.1"),
    key("count_epsilon", Kind::Positive, "0.01"),
    key("count_min", Kind::Float, "-1"),
    key("count_max", Kind::Float, "4"),
    key("count_points", Kind::Count, "20001"),
    key("count_tolerance", Kind::Positive, "1e-2"),
];

fn spectral_probe(p: &Params, _seed: u64, report: &mut Report) -> Result<()> {
    let s = spectrum(p)?;
    let eps = if p.float("epsilon") > 0.0 { p.float("epsilon") } else { s.default_epsilon() };
    let (lo, hi) = (p.float("e_min"), p.float("e_max"));
    let n = p.count("samples").max(2);
    let mut csv = String::from("E,R\n");
    for k in 0..n {
        let e = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let _ = writeln!(csv, "{}", csv_line(&[e, probe_r(&s, e, eps)]));
    }
    report.file("probe.csv", csv);
    report.file("levels.csv", levels_file(&s)?);

    let peaks = find_peaks(&s, eps, lo, hi)?;
    let inside: Vec<f64> = s.levels.iter().copied().filter(|e| *e > lo && *e < hi).collect();
    let mut csv = String::from("level,peak\n");
    for (e, peak) in inside.iter().zip(&peaks) {
        let _ = writeln!(csv, "{}", csv_line(&[*e, *peak]));
    }
    report.file("peaks.csv", csv);
    report.require("one peak per level in window", peaks.len() == inside.len());
    let worst = inside.iter().zip(&peaks).map(|(e, q)| (e - q).abs()).fold(0.0, f64::max);
    report.check("peak offset from level", worst, p.float("peak_tolerance_fraction") * eps);

    let (clo, chi) = (p.float("count_min"), p.float("count_max"));
    let count = level_count(&s, p.float("count_epsilon"), clo, chi, p.count("count_points"))?;
    let expected = s.levels.iter().filter(|e| **e > clo && **e < chi).count() as f64;
    report.check("level count deviation", (count - expected).abs(), p.float("count_tolerance"));
    Ok(())
}

const PROPER_TIME_KEYS: [Key; 10] = [
    SPECTRUM_KEYS[0],
    SPECTRUM_KEYS[1],
    SPECTRUM_KEYS[2],
    SPECTRUM_KEYS[3],
    SPECTRUM_KEYS[4],
    key("energies", Kind::FloatList, "0.7,1.0,1.8,2.5,3.3"),
    key("epsilon", Kind::Positive, "0.05"),
    key("domain", Kind::Text, "exact"),
    key("rel_tolerance", Kind::Positive, "1e-3"),
    key("runtime_limit", Kind::Positive, "30"),
];

fn proper_time(p: &Params, _seed: u64, report: &mut Report) -> Result<()> {
    let start = Instant::now();
    let s = spectrum(p)?;
    let mut config = ProbeConfig::new(p.float("epsilon"));
    config.domain = match p.text("domain") {
        "exact" => Domain::Exact,
        "relaxed" => Domain::Relaxed,
        other => return Err(Error::invalid("domain", format!("expected exact or relaxed, got {other}"))),
    };
    let mut csv = String::from("E,proper_time,probe,relative_difference\n");
    for e in p.list("energies") {
        let r = proper_time_r(&s, e, &config)?;
        let oracle = probe_r(&s, e, config.epsilon);
        let rel = (r - oracle).abs() / oracle;
        let _ = writeln!(csv, "{}", csv_line(&[e, r, oracle, rel]));
        report.check(format!("proper time vs probe at E={e}"), rel, p.float("rel_tolerance"));
    }
    report.file("proper_time.csv", csv);
    report.check("runtime seconds", start.elapsed().as_secs_f64(), p.float("runtime_limit"));
    Ok(())
}

const UNITARITY_KEYS: [Key; 10] = [
    SPECTRUM_KEYS[0],
    SPECTRUM_KEYS[1],
    SPECTRUM_KEYS[2],
    SPECTRUM_KEYS[3],
    SPECTRUM_KEYS[4],
    key("energies", Kind::FloatList, "0.5,1.0,2.2,3.7"),
    key("epsilon", Kind::Positive, "0.05"),
    key("random_levels", Kind::Count, "3"),
    key("random_trials", Kind::Count, "3"),
    key("tolerance", Kind::Positive, "1e-10"),
];

/// Seeded spectrum with uniform levels in `[0, 5)` and random orthonormal
/// wavefunctions on a 64-point grid.
pub fn random_spectrum(levels: usize, rng: &mut ChaCha8Rng) -> Result<Spectrum> {
    let grid = Grid::on_box(2.0, 64);
    let mut energies: Vec<f64> = (0..levels).map(|_| rng.gen_range(0.0..5.0)).collect();
    energies.sort_by(f64::total_cmp);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for _ in 0..levels {
        let mut v: Vec<f64> = (0..grid.points).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for b in &basis {
            let o: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * grid.dx;
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= o * y);
        }
        let norm = (grid.dx * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    Spectrum::from_parts(energies, basis, grid)
}

fn unitarity(p: &Params, seed: u64, report: &mut Report) -> Result<()> {
    let eps = p.float("epsilon");
    let s = spectrum(p)?;
    let mut csv = String::from("spectrum,E,residual\n");
    let mut worst: f64 = 0.0;
    for e in p.list("energies") {
        let r = unitarity_residual(&s, e, eps)?;
        worst = worst.max(r);
        let _ = writeln!(csv, "solved,{}", csv_line(&[e, r]));
    }
    report.check("residual on solved spectrum", worst, p.float("tolerance"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for trial in 0..p.count("random_trials") {
        let random = random_spectrum(p.count("random_levels"), &mut rng)?;
        for e in p.list("energies") {
            let r = unitarity_residual(&random, e, eps)?;
            worst = worst.max(r);
            let _ = writeln!(csv, "random{trial},{}", csv_line(&[e, r]));
        }
    }
    report.check("residual on random spectra", worst, p.float("tolerance"));
    report.file("unitarity.csv", csv);
    Ok(())
}

const DECOMPOSITION_KEYS: [Key; 10] = [
    key("k2", Kind::Float, "1"),
    key("k4", Kind::Float, "0.5"),
    key("t_final", Kind::Positive, "2"),
    key("dt", Kind::Positive, "1e-3"),
    key("x0", Kind::Float, "1"),
    key("p0", Kind::Float, "0.3"),
    key("lambdas", Kind::FloatList, "1e-3,2e-3,5e-3,1e-2"),
    key("linear_tolerance", Kind::Positive, "1e-10"),
    key("exponent", Kind::Float, "2"),
    key("exponent_tolerance", Kind::Positive, "0.05"),
];

fn action_decomposition(p: &Params, _seed: u64, report: &mut Report) -> Result<()> {
    let v = Polynomial { k2: p.float("k2"), k3: 0.0, k4: p.float("k4"), half_width: 50.0 };
    let grid = TimeGrid::with_step(p.float("t_final"), p.float("dt"))?;
    let x = solve_newton(&v, p.float("x0"), p.float("p0"), grid, &grid.zeros(), Integrator::VelocityVerlet)?;
    let lambdas = p.list("lambdas");
    let mut csv = String::from("lambda,linear_e_term,remainder_v,remainder_h,energy_term,identity_residual\n");
    let (mut rv, mut rh) = (Vec::new(), Vec::new());
    let (mut linear, mut identity): (f64, f64) = (0.0, 0.0);
    for &l in &lambdas {
        let de = decompose_action(&v, &x, &DeviationField::sine(x.len(), l, 0.0))?;
        let dt = decompose_action(&v, &x, &DeviationField::zero(x.len(), l))?;
        linear = linear.max(de.linear_e_term.abs());
        identity = identity.max(de.identity_residual()).max(dt.identity_residual());
        rv.push(de.remainder_v);
        rh.push(dt.remainder_h);
        let _ = writeln!(
            csv,
            "{}",
            csv_line(&[l, de.linear_e_term, de.remainder_v, dt.remainder_h, dt.energy_term, de.identity_residual()])
        );
    }
    report.file("decomposition.csv", csv);
    report.check("linear-in-e term", linear, p.float("linear_tolerance"));
    report.check("decomposition identity", identity, 1e-12);
    let target = p.float("exponent");
    let sv = log_log_slope(&lambdas, &rv);
    let sh = log_log_slope(&lambdas, &rh);
    report.check(format!("remainder_v exponent {sv:.4} vs {target}"), (sv - target).abs(), p.float("exponent_tolerance"));
    report.check(format!("remainder_h exponent {sh:.4} vs {target}"), (sh - target).abs(), p.float("exponent_tolerance"));
    Ok(())
}

const GREEN_KEYS: [Key; 4] = [
    key("t_final", Kind::Positive, "1"),
    key("dt", Kind::Positive, "2e-3"),
    key("operator_tolerance", Kind::Positive, "1e-8"),
    key("closed_form_tolerance", Kind::Positive, "1e-6"),
];

fn green_kernel(p: &Params, _seed: u64, report: &mut Report) -> Result<()> {
    let t = p.float("t_final");
    let grid = TimeGrid::with_step(t, p.float("dt"))?;
    let free = Polynomial::free(10.0);
    let harmonic = Polynomial::harmonic(10.0);
    let xf = solve_newton(&free, 1.0, 0.0, grid, &grid.zeros(), Integrator::VelocityVerlet)?;
    let xh = solve_newton(&harmonic, 1.0, 0.0, grid, &grid.zeros(), Integrator::VelocityVerlet)?;
    let gf = fluctuation_green(&free, &xf)?;
    let gh = fluctuation_green(&harmonic, &xh)?;
    let free_exact = |a: f64, b: f64| a.min(b) * (a.max(b) - t) / t;
    let harm_exact = |a: f64, b: f64| -a.min(b).sin() * (t - a.max(b)).sin() / t.sin();
    let (mut ef, mut eh): (f64, f64) = (0.0, 0.0);
    for i in 0..grid.len() {
        for j in 0..grid.len() {
            let (a, b) = (grid.time(i), grid.time(j));
            ef = ef.max((gf.value(i, j) - free_exact(a, b)).abs());
            eh = eh.max((gh.value(i, j) - harm_exact(a, b)).abs());
        }
    }
    let mid = grid.steps / 2;
    let mut csv = String::from("t,G_free,G_free_exact,G_harmonic,G_harmonic_exact\n");
    for i in 0..grid.len() {
        let (a, b) = (grid.time(i), grid.time(mid));
        let _ = writeln!(csv, "{}", csv_line(&[a, gf.value(i, mid), free_exact(a, b), gh.value(i, mid), harm_exact(a, b)]));
    }
    report.file("green.csv", csv);
    let tol = p.float("operator_tolerance");
    report.check("free operator residual", gf.operator_residual(), tol);
    report.check("harmonic operator residual", gh.operator_residual(), tol);
    report.check("free kernel vs closed form", ef, p.float("closed_form_tolerance"));
    report.check("harmonic kernel vs closed form", eh, p.float("closed_form_tolerance"));
    report.check("kernel asymmetry", gf.asymmetry().max(gh.asymmetry()), tol);
    Ok(())
}

const ACTION_ANGLE_KEYS: [Key; 6] = [
    key("k2", Kind::Float, "1"),
    key("k4", Kind::Float, "0.3"),
    key("points", Kind::Count, "12"),
    key("step", Kind::Positive, "1e-4"),
    key("bracket_tolerance", Kind::Positive, "1e-5"),
    key("round_trip_tolerance", Kind::Positive, "1e-8"),
];

fn action_angle(p: &Params, seed: u64, report: &mut Report) -> Result<()> {
    let v = Polynomial { k2: p.float("k2"), k3: 0.0, k4: p.float("k4"), half_width: 20.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv = String::from("x,p,h,theta,bracket,round_trip_error\n");
    let (mut bracket, mut round): (f64, f64) = (0.0, 0.0);
    for _ in 0..p.count("points") {
        // keep |p| away from zero so the point sits away from the turning points
        let x = rng.gen_range(-1.0..1.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mom = sign * rng.gen_range(0.3..1.2);
        let s = to_action_angle(&v, x, mom)?;
        let b = poisson_bracket(&v, x, mom, p.float("step"))?;
        let (x2, p2) = from_action_angle(&v, s.h, s.theta)?;
        let err = (x2 - x).abs().max((p2 - mom).abs());
        bracket = bracket.max((b - 1.0).abs());
        round = round.max(err);
        let _ = writeln!(csv, "{}", csv_line(&[x, mom, s.h, s.theta, b, err]));
    }
    report.file("action_angle.csv", csv);
    report.check("poisson bracket deviation", bracket, p.float("bracket_tolerance"));
    report.check("round trip error", round, p.float("round_trip_tolerance"));
    Ok(())
}

const RESPONSE_KEYS: [Key; 12] = [
    key("k2", Kind::Float, "1"),
    key("k4", Kind::Float, "0.5"),
    key("x0", Kind::Float, "0.8"),
    key("p0", Kind::Float, "0.3"),
    key("t_final", Kind::Positive, "5"),
    key("dt", Kind::Positive, "1e-3"),
    key("eta", Kind::Positive, "1e-4"),
    key("frequency", Kind::Float, "1.3"),
    key("rel_tolerance", Kind::Positive, "1e-3"),
    key("kernel_t", Kind::Positive, "2"),
    key("kernel_steps", Kind::Count, "200"),
    key("halving_tolerance", Kind::Positive, "0.05"),
];

/// First-order response of `(h, θ)` to the source `η·j`, extracted from the
/// Cartesian flow as the symmetric difference `(F(+η) - F(-η))/2`, which
/// cancels the second-order terms.
pub fn cartesian_action_angle_response(
    v: &Polynomial,
    x0: f64,
    p0: f64,
    grid: TimeGrid,
    source: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let s0 = to_action_angle(v, x0, p0)?;
    let mapped = |sign: f64| -> Result<Vec<(f64, f64)>> {
        let j: Vec<f64> = source.iter().map(|x| sign * x).collect();
        let tr = solve_newton(v, x0, p0, grid, &j, Integrator::Yoshida4)?;
        (0..grid.len())
            .map(|i| {
                let c = to_action_angle(v, tr.x[i], tr.v[i])?;
                let period = shell(v, c.h)?.period();
                let reference = s0.theta + grid.time(i);
                // continue θ past the wrap point of its own shell
                let turns = ((reference - c.theta) / period).round();
                Ok((c.h - s0.h, c.theta + turns * period - reference))
            })
            .collect()
    };
    let plus = mapped(1.0)?;
    let minus = mapped(-1.0)?;
    Ok(plus
        .iter()
        .zip(&minus)
        .map(|(a, b)| (0.5 * (a.0 - b.0), 0.5 * (a.1 - b.1)))
        .unzip())
}

fn response_equivalence(p: &Params, _seed: u64, report: &mut Report) -> Result<()> {
    let kt = p.float("kernel_t");
    let ks = p.count("kernel_steps").max(2);
    let coarse = RetardedKernel::new(ks + 1, kt / ks as f64);
    let fine = RetardedKernel::new(2 * ks + 1, kt / (2 * ks) as f64);
    report.require("g(0) equals 1/2", coarse.value(3, 3) == 0.5);
    let (c1, c2) = coarse.projection_defects();
    let (f1, f2) = fine.projection_defects();
    report.check("square-identity defect halving", (c1 / f1 - 2.0).abs(), p.float("halving_tolerance"));
    report.check("transpose-identity defect halving", (c2 / f2 - 2.0).abs(), p.float("halving_tolerance"));

    let v = Polynomial { k2: p.float("k2"), k3: 0.0, k4: p.float("k4"), half_width: 20.0 };
    let grid = TimeGrid::with_step(p.float("t_final"), p.float("dt"))?;
    let (x0, p0, eta, w) = (p.float("x0"), p.float("p0"), p.float("eta"), p.float("frequency"));
    let source = grid.sample(|t| eta * (w * t).sin());
    let (dh, dth) = cartesian_action_angle_response(&v, x0, p0, grid, &source)?;

    let s0 = to_action_angle(&v, x0, p0)?;
    let theta: Vec<f64> = (0..grid.len()).map(|i| s0.theta + grid.time(i)).collect();
    let (j_h, j_theta) = rescale_sources(&v, &vec![s0.h; grid.len()], &theta, &source, 1e-5)?;
    let hist = evolve_action_angle(s0.h, s0.theta, &j_h, &j_theta, grid.dt())?;

    let mut csv = String::from("t,dh_cartesian,dh_action_angle,dtheta_cartesian,dtheta_action_angle\n");
    let (mut eh, mut et, mut sh, mut st): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..grid.len() {
        let ah = hist.h[i] - s0.h;
        let at = hist.theta[i] - theta[i];
        eh = eh.max((dh[i] - ah).abs());
        et = et.max((dth[i] - at).abs());
        sh = sh.max(ah.abs());
        st = st.max(at.abs());
        if i % 10 == 0 {
            let _ = writeln!(csv, "{}", csv_line(&[grid.time(i), dh[i], ah, dth[i], at]));
        }
    }
    report.file("response.csv", csv);
    report.check("energy response relative error", eh / sh, p.float("rel_tolerance"));
    report.check("angle response relative error", et / st, p.float("rel_tolerance"));
    Ok(())
}

const POLAR_KEYS: [Key; 5] = [
    key("t_final", Kind::Positive, "10"),
    key("dt", Kind::Positive, "1e-3"),
    key("source_amplitude", Kind::Float, "0.1"),
    key("tolerance", Kind::Positive, "1e-6"),
    key("rotation_tolerance", Kind::Positive, "1e-9"),
];

/// Seeded initial data and smooth Cartesian sources for the polar checks.
pub fn polar_setup(rng: &mut ChaCha8Rng, grid: TimeGrid, amplitude: f64) -> (PolarState, Vec<f64>, Vec<f64>) {
    let init = PolarState {
        r: rng.gen_range(0.8..1.5),
        phi: rng.gen_range(-3.0..3.0),
        p: rng.gen_range(-0.5..0.5),
        l: rng.gen_range(0.5..1.5),
    };
    let (w1, w2) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
    let (f1, f2) = (rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0));
    let j1 = grid.sample(|t| amplitude * (w1 * t + f1).sin());
    let j2 = grid.sample(|t| amplitude * (w2 * t + f2).cos());
    (init, j1, j2)
}

fn polar_equivalence(p: &Params, seed: u64, report: &mut Report) -> Result<()> {
    let grid = TimeGrid::with_step(p.float("t_final"), p.float("dt"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (init, j1, j2) = polar_setup(&mut rng, grid, p.float("source_amplitude"));
    let sources = PolarSources::Cartesian { j1: j1.clone(), j2: j2.clone() };
    let cart0 = polar_to_cart(&init);
    let mut columns = Vec::new();
    for v in CentralPotential::ALL {
        let polar = solve_polar(v, init, &sources, grid, PolarOptions::default())?;
        let cart = cartesian_history_to_polar(&solve_cartesian(v, cart0, &j1, &j2, grid)?, init.phi)?;
        let column: Vec<f64> = polar
            .states
            .iter()
            .zip(&cart)
            .map(|(a, b)| sup_deviation(std::slice::from_ref(a), std::slice::from_ref(b)))
            .collect();
        report.check(format!("cartesian vs polar sup-norm for {}", v.name()), sup_deviation(&polar.states, &cart), p.float("tolerance"));

        let dt = grid.dt();
        let torque = (1..grid.steps)
            .map(|i| ((polar.states[i + 1].l - polar.states[i - 1].l) / (2.0 * dt) - polar.j_phi[i]).abs())
            .fold(0.0, f64::max);
        report.check(format!("dl/dt minus rescaled j_phi for {}", v.name()), torque, p.float("tolerance"));

        let radii: Vec<f64> = polar.states.iter().map(|s| s.r).collect();
        let rescaled = jacobian_log_weight(&radii, SourceConvention::Rescaled)?;
        let raw = jacobian_log_weight(&radii, SourceConvention::Raw)?;
        report.require(format!("rescaled measure weight is zero for {}", v.name()), rescaled.log_weight == 0.0);
        report.require(format!("raw measure weight is nonzero for {}", v.name()), raw.log_weight != 0.0);

        let alpha: f64 = 0.7;
        let (rj1, rj2): (Vec<f64>, Vec<f64>) = j1
            .iter()
            .zip(&j2)
            .map(|(&a, &b)| {
                let (c, s) = (alpha.cos(), alpha.sin());
                (c * a - s * b, s * a + c * b)
            })
            .unzip();
        let rotated_init = PolarState { phi: init.phi + alpha, ..init };
        let rotated = solve_polar(v, rotated_init, &PolarSources::Cartesian { j1: rj1, j2: rj2 }, grid, PolarOptions::default())?;
        let equivariance = polar
            .states
            .iter()
            .zip(&rotated.states)
            .map(|(a, b)| (a.r - b.r).abs().max((a.p - b.p).abs()).max((a.l - b.l).abs()).max((b.phi - a.phi - alpha).abs()))
            .fold(0.0, f64::max);
        report.check(format!("rotation equivariance for {}", v.name()), equivariance, p.float("rotation_tolerance"));
        columns.push(column);
    }
    let mut csv = String::from("t,deviation_harmonic,deviation_quartic,deviation_mixed\n");
    for i in (0..grid.len()).step_by(10) {
        let _ = writeln!(csv, "{}", csv_line(&[grid.time(i), columns[0][i], columns[1][i], columns[2][i]]));
    }
    report.file("polar.csv", csv);
    Ok(())
}
