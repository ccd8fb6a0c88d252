//! Single-point accuracy experiments: reconstruction error at one interface
//! over dyadic refinements `N_j = 5 * 2^j`, and decay rates of the
//! individual indicators.
//!
//! A study with `J` levels evaluates the grids `N_1, ..., N_J` and reports
//! the local orders `o_j = log2(E_{j-1} / E_j)` for `j = 2..=J`.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::recon::{ReconstructionResult, StencilValues, Variant, WeightParams, WenoKernel};
use crate::scalar::{expm1, Scalar};
use crate::tables::{build_tables, DataMode, MAX_R};

/// Functions used by the accuracy studies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestFunction {
    /// `x^{k+1} e^x`: a critical point of order `k` at the origin.
    Critical { k: usize },
    /// `e^x`, smooth with no critical point.
    Exponential,
    /// `e^x` for `x <= 0` and `e^{x+1}` for `x > 0`.
    Jump,
}

impl TestFunction {
    pub fn name(&self) -> String {
        match self {
            TestFunction::Critical { k } => format!("f{k}"),
            TestFunction::Exponential => "exp".into(),
            TestFunction::Jump => "jump".into(),
        }
    }

    /// Order of the critical point at the origin; `None` when there is none
    /// or the function is discontinuous there.
    pub fn critical_order(&self) -> Option<usize> {
        match self {
            TestFunction::Critical { k } => Some(*k),
            _ => None,
        }
    }

    pub fn is_discontinuous(&self) -> bool {
        matches!(self, TestFunction::Jump)
    }

    pub fn eval<S: Scalar>(&self, x: S) -> S {
        match self {
            TestFunction::Critical { k } => x.powi(*k as i32 + 1) * x.exp(),
            TestFunction::Exponential => x.exp(),
            TestFunction::Jump => {
                if x > S::zero() {
                    (x + S::one()).exp()
                } else {
                    x.exp()
                }
            }
        }
    }

    /// Exact mean over `[a, b]`.
    pub fn cell_average<S: Scalar>(&self, a: S, b: S) -> S {
        match self {
            TestFunction::Critical { k } => critical_average(*k, a, b),
            TestFunction::Exponential => exp_average(a, b),
            TestFunction::Jump => {
                let zero = S::zero();
                if b <= zero {
                    exp_average(a, b)
                } else if a >= zero {
                    exp_average(a, b) * S::one().exp()
                } else {
                    let e = S::one().exp();
                    (S::one() - a.exp() + e * (b.exp() - S::one())) / (b - a)
                }
            }
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn exp_average<S: Scalar>(a: S, b: S) -> S {
    let h = b - a;
    a.exp() * expm1(h) / h
}

/// Mean of `x^{k+1} e^x` over `[a, b]` from the termwise antiderivative
/// `sum_n x^{n+k+2} / ((n+k+2) n!)`, with `(b^m - a^m)/(b - a)` expanded so
/// that nothing cancels.
fn critical_average<S: Scalar>(k: usize, a: S, b: S) -> S {
    if a == S::zero() && b == S::zero() {
        return S::zero();
    }
    let scale = a.abs().max(b.abs());
    let mut sum = S::zero();
    let mut inv_fact = S::one();
    for n in 0..400usize {
        if n > 0 {
            inv_fact /= S::from_i64(n as i64);
        }
        let m = n + k + 2;
        // sum_{i<m} b^i a^{m-1-i}
        let acc = if a == S::zero() {
            b.powi(m as i32 - 1)
        } else {
            let a_inv = S::one() / a;
            let mut ap = a.powi(m as i32 - 1);
            let mut bp = S::one();
            let mut acc = S::zero();
            for _ in 0..m {
                acc += bp * ap;
                bp *= b;
                ap *= a_inv;
            }
            acc
        };
        sum += acc * inv_fact / S::from_i64(m as i64);
        // every later term is below scale^{m-1} / n!
        if scale.powi(m as i32 - 1) * inv_fact <= S::epsilon() * sum.abs() * S::from_f64(1e-3) {
            break;
        }
    }
    sum
}

/// Which experiment a report belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StudyCase {
    Smooth { k: usize },
    Discontinuous { theta: i64 },
}

impl StudyCase {
    pub fn parameter(&self) -> i64 {
        match self {
            StudyCase::Smooth { k } => *k as i64,
            StudyCase::Discontinuous { theta } => *theta,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelResult {
    pub n: usize,
    pub error: f64,
    /// Error printed at full field precision.
    pub error_text: String,
    /// `log2(E_{j-1} / E_j)`; `None` on the coarsest grid.
    pub local_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub variant: Variant,
    pub r: usize,
    pub mode: DataMode,
    pub case: StudyCase,
    pub field: &'static str,
    pub levels: Vec<LevelResult>,
    /// Mean local order; the coarsest pair is dropped when there are at
    /// least five levels.
    pub average_order: f64,
}

impl ConvergenceReport {
    pub const CSV_HEADER: &'static str = "variant,r,mode,k_or_theta,N,error,local_order";

    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for l in &self.levels {
            let order = l.local_order.map(|o| format!("{o:.16e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.variant,
                self.r,
                self.mode,
                self.case.parameter(),
                l.n,
                l.error_text,
                order
            );
        }
        out
    }
}

/// Markdown table with one row per report: case parameter, variant, average order.
pub fn markdown_table(reports: &[ConvergenceReport]) -> String {
    let mut out = String::from("| variant | r | mode | k/theta | levels | O |\n|---|---|---|---|---|---|\n");
    for rep in reports {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {:.4} |",
            rep.variant.label(),
            rep.r,
            rep.mode,
            rep.case.parameter(),
            rep.levels.len(),
            rep.average_order
        );
    }
    out
}

fn level_n(j: usize) -> usize {
    5 << j
}

/// Fails when the expected error at the finest level, `h^p`, is too close to
/// the field's rounding level.
fn check_precision<S: Scalar>(p: usize, levels: usize) -> Result<()> {
    let floor = 100.0 * S::epsilon().to_f64();
    let expected = |j: usize| (1.0 / level_n(j) as f64).powi(p as i32);
    let e = expected(levels);
    if e < floor {
        let max_levels = (1..=levels).take_while(|&j| expected(j) >= floor).count();
        return Err(Error::PrecisionInsufficient { expected_error: e, max_levels });
    }
    Ok(())
}

/// The window of `2r - 1` samples around `x_0 = (theta - 1/2) h`, for
/// reconstruction at `theta h`.
fn sample_window<S: Scalar>(func: TestFunction, r: usize, mode: DataMode, n: usize, theta: i64, out: &mut [S]) {
    let h = S::one() / S::from_i64(n as i64);
    let half = S::from_f64(0.5);
    for (idx, slot) in out.iter_mut().enumerate().take(2 * r - 1) {
        let j = idx as i64 - r as i64 + 1;
        *slot = match mode {
            DataMode::PointValues => func.eval((S::from_i64(j + theta) - half) * h),
            DataMode::CellAverages => {
                let a = S::from_i64(j - 1 + theta) * h;
                let b = S::from_i64(j + theta) * h;
                func.cell_average(a, b)
            }
        };
    }
}

fn run_study<S: Scalar>(
    r: usize,
    mode: DataMode,
    params: WeightParams<S>,
    func: TestFunction,
    theta: i64,
    case: StudyCase,
    levels: usize,
    expected_order: usize,
) -> Result<ConvergenceReport> {
    if levels < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 levels, got {levels}")));
    }
    check_precision::<S>(expected_order, levels)?;
    let kernel = WenoKernel::new(&build_tables(r, mode)?, params)?;
    let mut rows: Vec<LevelResult> = Vec::with_capacity(levels);
    let mut prev: Option<S> = None;
    for j in 1..=levels {
        let n = level_n(j);
        let mut f = [S::zero(); 2 * MAX_R - 1];
        sample_window(func, r, mode, n, theta, &mut f);
        let target = func.eval(S::from_i64(theta) / S::from_i64(n as i64));
        let err = (kernel.reconstruct_value(&f[..2 * r - 1]) - target).abs();
        if err == S::zero() {
            return Err(Error::DegenerateData { level: j });
        }
        let local_order = prev.map(|p| (p / err).ln().to_f64() / std::f64::consts::LN_2);
        rows.push(LevelResult { n, error: err.to_f64(), error_text: err.to_sci_string(), local_order });
        prev = Some(err);
    }
    let orders: Vec<f64> = rows.iter().filter_map(|l| l.local_order).collect();
    let used = if levels >= 5 { &orders[1..] } else { &orders[..] };
    let average_order = used.iter().sum::<f64>() / used.len() as f64;
    Ok(ConvergenceReport {
        variant: params.variant,
        r,
        mode,
        case,
        field: S::NAME,
        levels: rows,
        average_order,
    })
}

/// Error of the reconstruction of `x^{k+1} e^x` at the origin on the grid
/// `x_j = (j - 1/2) h`.
pub fn run_smooth_order_study<S: Scalar>(
    r: usize,
    mode: DataMode,
    params: WeightParams<S>,
    k: usize,
    levels: usize,
) -> Result<ConvergenceReport> {
    if k > 2 * r - 3 {
        return Err(Error::InvalidParams(format!("k = {k} exceeds 2r - 3 = {}", 2 * r - 3)));
    }
    run_study(r, mode, params, TestFunction::Critical { k }, 0, StudyCase::Smooth { k }, levels, 2 * r - 1)
}

/// Error at `theta h` for the exponential with a unit jump at the origin on
/// the grid `x_j = (j - 1/2 + theta) h`.
pub fn run_discontinuous_order_study<S: Scalar>(
    r: usize,
    mode: DataMode,
    params: WeightParams<S>,
    theta: i64,
    levels: usize,
) -> Result<ConvergenceReport> {
    let (lo, hi) = (2 - r as i64, r as i64 - 1);
    if theta < lo || theta > hi {
        return Err(Error::InvalidParams(format!("theta = {theta} outside [{lo}, {hi}]")));
    }
    run_study(r, mode, params, TestFunction::Jump, theta, StudyCase::Discontinuous { theta }, levels, r)
}

/// Per-level record of every intermediate reconstruction quantity, as CSV
/// with an `N` column followed by [`ReconstructionResult::csv_header`].
pub fn trace_study<S: Scalar>(
    r: usize,
    mode: DataMode,
    params: WeightParams<S>,
    case: StudyCase,
    levels: usize,
) -> Result<String> {
    let (func, theta) = match case {
        StudyCase::Smooth { k } => (TestFunction::Critical { k }, 0),
        StudyCase::Discontinuous { theta } => (TestFunction::Jump, theta),
    };
    let kernel = WenoKernel::new(&build_tables(r, mode)?, params)?;
    let mut out = format!("N,{}\n", ReconstructionResult::<S>::csv_header(r));
    for j in 1..=levels {
        let mut f = [S::zero(); 2 * MAX_R - 1];
        sample_window(func, r, mode, level_n(j), theta, &mut f);
        let res = kernel.reconstruct(&StencilValues::new(f[..2 * r - 1].to_vec(), r, mode)?)?;
        let _ = writeln!(out, "{},{}", level_n(j), res.csv_row());
    }
    Ok(out)
}

/// Quantity tracked by [`slope_probe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeQuantity {
    Indicator(usize),
    D1,
    D2,
    CombinedD,
}

impl std::str::FromStr for ProbeQuantity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "d1" => Ok(ProbeQuantity::D1),
            "d2" => Ok(ProbeQuantity::D2),
            "D" | "combined" => Ok(ProbeQuantity::CombinedD),
            _ => s
                .strip_prefix('I')
                .and_then(|i| i.parse().ok())
                .map(ProbeQuantity::Indicator)
                .ok_or_else(|| format!("unknown quantity `{s}` (expected I<i>, d1, d2 or D)")),
        }
    }
}

/// Magnitude of `quantity` on the grid of [`run_smooth_order_study`] at each
/// level `j = 1..=levels`.
pub fn probe_values<S: Scalar>(
    quantity: ProbeQuantity,
    func: TestFunction,
    r: usize,
    mode: DataMode,
    levels: usize,
) -> Result<Vec<S>> {
    if let ProbeQuantity::Indicator(i) = quantity {
        if i >= r {
            return Err(Error::InvalidParams(format!("indicator index {i} out of range for r = {r}")));
        }
    }
    let params = WeightParams::<S>::default_for(Variant::Oweno, r);
    let kernel = WenoKernel::new(&build_tables(r, mode)?, params)?;
    (1..=levels)
        .map(|j| {
            let mut f = [S::zero(); 2 * MAX_R - 1];
            sample_window(func, r, mode, level_n(j), 0, &mut f);
            let f = &f[..2 * r - 1];
            let q = match quantity {
                ProbeQuantity::Indicator(i) => {
                    let mut ind = [S::zero(); MAX_R];
                    kernel.indicators_into(f, &mut ind[..r]);
                    ind[i]
                }
                ProbeQuantity::D1 => kernel.d1_of(f),
                ProbeQuantity::D2 => kernel.d2_of(f).abs(),
                ProbeQuantity::CombinedD => {
                    crate::recon::combined_d(kernel.d1_of(f), kernel.d2_of(f), &params)
                }
            };
            if q == S::zero() {
                Err(Error::DegenerateData { level: j })
            } else {
                Ok(q)
            }
        })
        .collect()
}

/// Least-squares decay rate of `quantity`: minus the slope of `log2 q`
/// against the level index.
pub fn slope_probe<S: Scalar>(
    quantity: ProbeQuantity,
    func: TestFunction,
    r: usize,
    mode: DataMode,
    levels: usize,
) -> Result<f64> {
    if levels < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 levels, got {levels}")));
    }
    let values = probe_values::<S>(quantity, func, r, mode, levels)?;
    let ys: Vec<f64> = values.iter().map(|q| q.ln().to_f64() / std::f64::consts::LN_2).collect();
    Ok(-fit_slope(&ys))
}

fn fit_slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let xbar = (n - 1.0) / 2.0;
    let ybar = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - xbar;
        sxy += dx * (y - ybar);
        sxx += dx * dx;
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DoubleDouble;

    #[test]
    fn slope_fit_on_exact_line() {
        assert!((fit_slope(&[1.0, -3.0, -7.0, -11.0]) + 4.0).abs() < 1e-14);
    }

    #[test]
    fn critical_average_handles_zero_endpoint() {
        // mean of x^2 e^x over [0, h] and [-h, 0] against the closed form,
        // both in double-double so the closed form's cancellation is harmless
        type D = DoubleDouble;
        let h = D::one() / D::from_i64(10);
        let two = D::from_i64(2);
        let exact = (h.exp() * (h * h - two * h + two) - two) / h;
        let got = TestFunction::Critical { k: 1 }.cell_average(D::zero(), h);
        assert!((got - exact).abs().to_f64() < 1e-28, "{got} vs {exact}");
        let exact = (two - (-h).exp() * (h * h + two * h + two)) / h;
        let got = TestFunction::Critical { k: 1 }.cell_average(-h, D::zero());
        assert!((got - exact).abs().to_f64() < 1e-28);
    }

    #[test]
    fn jump_average_straddling_origin() {
        let got = TestFunction::Jump.cell_average(-0.5f64, 0.5);
        let exact = (1.0 - (-0.5f64).exp() + 1f64.exp() * (0.5f64.exp() - 1.0)) / 1.0;
        assert!((got - exact).abs() < 1e-15);
    }

    #[test]
    fn precision_guard_suggests_levels() {
        let p = WeightParams::<f64>::default_for(Variant::Oweno, 4);
        match run_smooth_order_study(4, DataMode::PointValues, p, 0, 6) {
            Err(Error::PrecisionInsufficient { max_levels, .. }) => assert!(max_levels < 6),
            other => panic!("expected precision error, got {other:?}"),
        }
        let p = WeightParams::<DoubleDouble>::default_for(Variant::Oweno, 4);
        assert!(run_smooth_order_study(4, DataMode::PointValues, p, 0, 5).is_ok());
    }

    #[test]
    fn rejects_out_of_range_cases() {
        let p = WeightParams::<f64>::default_for(Variant::JiangShu, 3);
        assert!(run_smooth_order_study(3, DataMode::PointValues, p, 4, 4).is_err());
        assert!(run_discontinuous_order_study(3, DataMode::PointValues, p, -2, 4).is_err());
        assert!(run_discontinuous_order_study(3, DataMode::PointValues, p, 2, 4).is_ok());
    }

    #[test]
    fn report_csv_has_one_row_per_level() {
        let p = WeightParams::<f64>::default_for(Variant::Oweno, 3);
        let rep = run_smooth_order_study(3, DataMode::CellAverages, p, 0, 4).unwrap();
        assert_eq!(rep.csv_rows().lines().count(), 4);
        assert_eq!(rep.levels[0].n, 10);
        assert_eq!(rep.levels[3].n, 80);
        assert!(rep.levels[0].local_order.is_none());
        assert!(markdown_table(&[rep]).contains("OWENO"));
    }

    #[test]
    fn quantity_names_parse() {
        assert_eq!("I2".parse::<ProbeQuantity>(), Ok(ProbeQuantity::Indicator(2)));
        assert_eq!("d2".parse::<ProbeQuantity>(), Ok(ProbeQuantity::D2));
        assert!("x".parse::<ProbeQuantity>().is_err());
    }
}
