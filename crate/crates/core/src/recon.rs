//! Smoothness indicators, weight designs and the WENO reconstruction at
//! `x_{1/2}` from a window of `2r - 1` values.
//!
//! All four variants share the same substencil reconstructions and
//! Jiang-Shu indicators; they differ only in how the nonlinear weights are
//! formed:
//!
//! | variant | unnormalized weight |
//! |---------|---------------------|
//! | JS      | `c_i / (I_i + eps)^2` |
//! | Z       | `c_i (1 + (tau / (I_i + eps))^s1)`, `tau = |I_0 - I_{r-1}|` |
//! | YC      | `c_i (1 + d1^s1 / (I_i^s1 + eps))^s2` |
//! | OWENO   | `c_i (1 + D / (I_i^s1 + eps))^s2`, `D = d1^s1 |d2|^s1 / (d1^s1 + |d2|^s1 + eps)` |
//!
//! Weights are evaluated in a rescaled form (every factor divided by the
//! largest one) so that a tiny `eps` never overflows the field.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use num_traits::Zero;

use crate::scalar::{Rational, Scalar};
use crate::tables::{DataMode, SchemeTables, MAX_R};

/// Weight design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    JiangShu,
    WenoZ,
    YamaleevCarpenter,
    Oweno,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::JiangShu,
        Variant::WenoZ,
        Variant::YamaleevCarpenter,
        Variant::Oweno,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::JiangShu => "js",
            Variant::WenoZ => "z",
            Variant::YamaleevCarpenter => "yc",
            Variant::Oweno => "oweno",
        }
    }

    /// Display label for report tables.
    pub fn label(self) -> &'static str {
        match self {
            Variant::JiangShu => "JS-WENO",
            Variant::WenoZ => "WENO-Z",
            Variant::YamaleevCarpenter => "YC-WENO",
            Variant::Oweno => "OWENO",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "js" | "jiang-shu" | "js-weno" => Ok(Variant::JiangShu),
            "z" | "weno-z" | "wenoz" => Ok(Variant::WenoZ),
            "yc" | "yamaleev-carpenter" | "yc-weno" => Ok(Variant::YamaleevCarpenter),
            "oweno" | "o" => Ok(Variant::Oweno),
            other => Err(format!("unknown variant `{other}` (expected js, z, yc or oweno)")),
        }
    }
}

/// Exponents and regularization for a weight design.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightParams<S> {
    pub variant: Variant,
    pub s1: u32,
    pub s2: f64,
    pub eps: S,
    /// Permit odd `s1` for OWENO; `|d2|` is then taken explicitly.
    pub abs_d2: bool,
}

/// Default regularization shared by every variant.
pub const DEFAULT_EPS: f64 = 1e-100;

impl<S: Scalar> WeightParams<S> {
    /// `s1 = 2 ceil(r/4)`, `s2 = 1`, `eps = 1e-100`.
    pub fn default_for(variant: Variant, r: usize) -> Self {
        Self {
            variant,
            s1: 2 * r.div_ceil(4) as u32,
            s2: 1.0,
            eps: S::from_f64(DEFAULT_EPS),
            abs_d2: false,
        }
    }

    pub fn with_eps(mut self, eps: S) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_exponents(mut self, s1: u32, s2: f64) -> Self {
        self.s1 = s1;
        self.s2 = s2;
        self
    }

    pub fn validate(&self, r: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if !(self.eps > S::zero()) || !self.eps.is_finite() {
            return bad(format!("eps must be positive and finite, got {:?}", self.eps));
        }
        if self.s1 < 1 {
            return bad("s1 must be at least 1".into());
        }
        if !(self.s2 > 0.0) || !self.s2.is_finite() {
            return bad(format!("s2 must be positive, got {}", self.s2));
        }
        if matches!(self.variant, Variant::YamaleevCarpenter | Variant::Oweno)
            && 2.0 * self.s1 as f64 * self.s2 < r as f64
        {
            return bad(format!(
                "2 s1 s2 = {} must be at least r = {r}",
                2.0 * self.s1 as f64 * self.s2
            ));
        }
        if self.variant == Variant::Oweno && self.s1 % 2 == 1 && !self.abs_d2 {
            return bad(format!("odd s1 = {} requires absolute-value mode", self.s1));
        }
        Ok(())
    }
}

/// The `2r - 1` local values `f_{-r+1}, ..., f_{r-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StencilValues<S> {
    values: Vec<S>,
    r: usize,
    mode: DataMode,
}

impl<S: Scalar> StencilValues<S> {
    pub fn new(values: Vec<S>, r: usize, mode: DataMode) -> Result<Self> {
        if values.len() != 2 * r - 1 {
            return Err(Error::DimensionMismatch { expected: 2 * r - 1, got: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        Ok(Self { values, r, mode })
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn mode(&self) -> DataMode {
        self.mode
    }

    /// The window reflected about `x_0`, for right-biased reconstruction.
    pub fn mirrored(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self { values, ..*self }
    }
}

/// Reconstructed value plus every intermediate quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult<S> {
    pub value: S,
    pub weights: Vec<S>,
    pub indicators: Vec<S>,
    /// `p_i(x_{1/2})` for each substencil.
    pub candidates: Vec<S>,
    pub d1: S,
    pub d2: S,
    pub d: S,
}

impl<S: Scalar> ReconstructionResult<S> {
    pub fn csv_header(r: usize) -> String {
        let mut cols: Vec<String> = (0..r).map(|i| format!("I{i}")).collect();
        cols.extend(["d1".into(), "d2".into(), "D".into()]);
        cols.extend((0..r).map(|i| format!("w{i}")));
        cols.push("value".into());
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols: Vec<String> = self.indicators.iter().map(|v| v.to_sci_string()).collect();
        cols.extend([self.d1, self.d2, self.d].iter().map(|v| v.to_sci_string()));
        cols.extend(self.weights.iter().map(|v| v.to_sci_string()));
        cols.push(self.value.to_sci_string());
        cols.join(",")
    }
}

#[inline(always)]
fn pow_u<S: Scalar>(x: S, n: i32) -> S {
    match n {
        1 => x,
        2 => x * x,
        _ => x.powi(n),
    }
}

/// `D = d1^s1 |d2|^s1 / (d1^s1 + |d2|^s1 + eps)`.
///
/// With an even `s1` the power already removes the sign of `d2`, so no
/// absolute value is taken.
#[inline]
pub fn combined_d<S: Scalar>(d1: S, d2: S, params: &WeightParams<S>) -> S {
    let s1 = params.s1 as i32;
    let a = pow_u(d1, s1);
    let b = if params.s1 % 2 == 0 { pow_u(d2, s1) } else { pow_u(d2.abs(), s1) };
    a * b / (a + b + params.eps)
}

/// Nonlinear weights from indicators and the global term `d` (ignored by JS
/// and Z). Writes `ideal.len()` weights into `out`.
#[inline]
pub fn weights<S: Scalar>(ideal: &[S], indicators: &[S], d: S, params: &WeightParams<S>, out: &mut [S]) {
    let r = ideal.len();
    let eps = params.eps;
    let mut beta = [S::zero(); MAX_R];
    match params.variant {
        Variant::JiangShu => {
            for i in 0..r {
                beta[i] = indicators[i] + eps;
            }
            let m = min_of(&beta[..r]);
            for i in 0..r {
                let t = m / beta[i];
                out[i] = ideal[i] * t * t;
            }
        }
        Variant::WenoZ => {
            let s1 = params.s1 as i32;
            let tau = (indicators[0] - indicators[r - 1]).abs();
            for i in 0..r {
                beta[i] = indicators[i] + eps;
            }
            let m = min_of(&beta[..r]);
            let u = (tau / m).max(S::one());
            let base = pow_u(S::one() / u, s1);
            for i in 0..r {
                out[i] = ideal[i] * (base + pow_u(tau / beta[i] / u, s1));
            }
        }
        Variant::YamaleevCarpenter | Variant::Oweno => {
            let s1 = params.s1 as i32;
            for i in 0..r {
                beta[i] = pow_u(indicators[i], s1) + eps;
            }
            let m = min_of(&beta[..r]);
            // (1 + d/beta_i) / (1 + d/m) = a + (1 - a) m/beta_i, never above one
            let inv = S::one() / (m + d);
            let (a, b) = (m * inv, d * inv);
            if params.s2 == 1.0 {
                for i in 0..r {
                    out[i] = ideal[i] * (a + b * (m / beta[i]));
                }
            } else {
                for i in 0..r {
                    out[i] = ideal[i] * (a + b * (m / beta[i])).powf(params.s2);
                }
            }
        }
    }
    let mut sum = S::zero();
    for w in out[..r].iter() {
        sum += *w;
    }
    let inv = S::one() / sum;
    for w in out[..r].iter_mut() {
        *w *= inv;
    }
}

#[inline]
fn min_of<S: Scalar>(v: &[S]) -> S {
    v[1..].iter().fold(v[0], |m, &x| m.min(x))
}

/// Tables converted to a working field together with a weight design.
#[derive(Clone, Debug)]
pub struct WenoKernel<S> {
    r: usize,
    mode: DataMode,
    params: WeightParams<S>,
    sub: Vec<S>,
    ideal: Vec<S>,
    // indicator forms, d1 and d2 act on first differences of the window so
    // that constant data give exact zeros
    si: Vec<S>,
    d1: Vec<S>,
    d2: Vec<S>,
}

/// `e` with `sum_k e_k (f_{k+1} - f_k) = c . f`, given `sum c = 0`.
fn on_differences(c: &[Rational]) -> Vec<Rational> {
    let mut acc = Rational::zero();
    let mut e = Vec::with_capacity(c.len() - 1);
    for cj in &c[..c.len() - 1] {
        acc -= cj;
        e.push(acc.clone());
    }
    debug_assert!((acc - &c[c.len() - 1]).is_zero());
    e
}

/// `Q'` with `d^T Q' d = f^T Q f` for `d` the differences of `f`, given `Q 1 = 0`.
fn form_on_differences(q: &[Vec<Rational>]) -> Vec<Rational> {
    let n = q.len();
    let mut out = Vec::with_capacity((n - 1) * (n - 1));
    for a in 0..n - 1 {
        for b in 0..n - 1 {
            let mut s = Rational::zero();
            for row in &q[a + 1..] {
                for v in &row[b + 1..] {
                    s += v;
                }
            }
            out.push(s);
        }
    }
    out
}

#[inline]
fn differences<S: Scalar>(f: &[S], out: &mut [S]) {
    for (k, d) in out.iter_mut().enumerate() {
        *d = f[k + 1] - f[k];
    }
}

impl<S: Scalar> WenoKernel<S> {
    pub fn new(tables: &SchemeTables, params: WeightParams<S>) -> Result<Self> {
        params.validate(tables.r)?;
        let conv = |v: &[Rational]| v.iter().map(S::from_rational).collect::<Vec<S>>();
        Ok(Self {
            r: tables.r,
            mode: tables.mode,
            params,
            sub: tables.sub_coeffs.iter().flat_map(|c| conv(c)).collect(),
            ideal: conv(&tables.ideal_weights),
            si: tables.si_forms.iter().flat_map(|q| conv(&form_on_differences(q))).collect(),
            d1: conv(&on_differences(&tables.d1_coeffs)),
            d2: tables.d2_functionals.iter().flat_map(|f| conv(&on_differences(f))).collect(),
        })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn width(&self) -> usize {
        2 * self.r - 1
    }

    /// Takes the discriminant functionals from `detector` instead, keeping
    /// candidates and indicators. Used when point samples are reconstructed as
    /// if they were cell averages: the discriminant then sees the critical
    /// points of the sampled function rather than of its cell-average
    /// preimage.
    pub fn with_discriminant_from(mut self, detector: &SchemeTables) -> Result<Self> {
        if detector.r != self.r {
            return Err(Error::DimensionMismatch { expected: self.r, got: detector.r });
        }
        let conv = |v: &[Rational]| v.iter().map(S::from_rational).collect::<Vec<S>>();
        self.d2 = detector.d2_functionals.iter().flat_map(|f| conv(&on_differences(f))).collect();
        Ok(self)
    }

    pub fn mode(&self) -> DataMode {
        self.mode
    }

    pub fn params(&self) -> &WeightParams<S> {
        &self.params
    }

    pub fn ideal_weights(&self) -> &[S] {
        &self.ideal
    }

    fn check(&self, s: &StencilValues<S>) -> Result<()> {
        if s.r != self.r {
            return Err(Error::DimensionMismatch { expected: self.width(), got: s.values.len() });
        }
        if s.mode != self.mode {
            return Err(Error::InvalidParams(format!(
                "stencil data are {} but the kernel was built for {}",
                s.mode, self.mode
            )));
        }
        Ok(())
    }

    /// `I_i` from the window differences `df`, clamped at zero.
    #[inline]
    fn indicators_from_diffs(&self, df: &[S], out: &mut [S]) {
        let r = self.r;
        let m = r - 1;
        for i in 0..r {
            let q = &self.si[i * m * m..(i + 1) * m * m];
            let w = &df[i..i + m];
            let mut acc = S::zero();
            for a in 0..m {
                let mut row = S::zero();
                for b in 0..m {
                    row += q[a * m + b] * w[b];
                }
                acc += w[a] * row;
            }
            out[i] = acc.max(S::zero());
        }
    }

    /// `I_i = f^T Q_i f` for each substencil, clamped at zero.
    pub fn indicators_into(&self, f: &[S], out: &mut [S]) {
        let mut df = [S::zero(); 2 * MAX_R - 2];
        differences(&f[..self.width()], &mut df[..self.width() - 1]);
        self.indicators_from_diffs(&df, out);
    }

    #[inline]
    fn candidates_into(&self, f: &[S], out: &mut [S]) {
        let r = self.r;
        for i in 0..r {
            let c = &self.sub[i * r..(i + 1) * r];
            let mut acc = S::zero();
            for j in 0..r {
                acc += c[j] * f[i + j];
            }
            out[i] = acc;
        }
    }

    #[inline]
    fn dot(coeffs: &[S], f: &[S]) -> S {
        let mut acc = S::zero();
        for (c, v) in coeffs.iter().zip(f) {
            acc += *c * *v;
        }
        acc
    }

    #[inline]
    fn d1_from_diffs(&self, df: &[S]) -> S {
        let t = Self::dot(&self.d1, df);
        t * t
    }

    #[inline]
    fn d2_from_diffs(&self, df: &[S]) -> S {
        let (a, b, c) = self.parabola_from_diffs(df);
        b * b - S::from_f64(4.0) * a * c
    }

    #[inline]
    fn parabola_from_diffs(&self, df: &[S]) -> (S, S, S) {
        let m = self.width() - 1;
        (
            Self::dot(&self.d2[..m], df),
            Self::dot(&self.d2[m..2 * m], df),
            Self::dot(&self.d2[2 * m..], df),
        )
    }

    fn diffs(&self, f: &[S]) -> [S; 2 * MAX_R - 2] {
        let mut df = [S::zero(); 2 * MAX_R - 2];
        differences(&f[..self.width()], &mut df[..self.width() - 1]);
        df
    }

    /// Squared undivided difference of order `2r - 2`.
    pub fn d1_of(&self, f: &[S]) -> S {
        self.d1_from_diffs(&self.diffs(f))
    }

    /// `(A, B, C)` of the parabola `P^{(2r-4)}(w)`.
    pub fn parabola_of(&self, f: &[S]) -> (S, S, S) {
        self.parabola_from_diffs(&self.diffs(f))
    }

    /// Discriminant `B^2 - 4AC`.
    pub fn d2_of(&self, f: &[S]) -> S {
        self.d2_from_diffs(&self.diffs(f))
    }

    /// `d` entering the YC and OWENO weights; zero for JS and Z.
    #[inline]
    fn global_term(&self, df: &[S]) -> S {
        match self.params.variant {
            Variant::JiangShu | Variant::WenoZ => S::zero(),
            Variant::YamaleevCarpenter => pow_u(self.d1_from_diffs(df), self.params.s1 as i32),
            Variant::Oweno => combined_d(self.d1_from_diffs(df), self.d2_from_diffs(df), &self.params),
        }
    }

    pub fn smoothness_indicators(&self, s: &StencilValues<S>) -> Result<Vec<S>> {
        self.check(s)?;
        let mut out = vec![S::zero(); self.r];
        self.indicators_into(&s.values, &mut out);
        Ok(out)
    }

    pub fn d1_indicator(&self, s: &StencilValues<S>) -> Result<S> {
        self.check(s)?;
        Ok(self.d1_of(&s.values))
    }

    pub fn d2_indicator(&self, s: &StencilValues<S>) -> Result<S> {
        self.check(s)?;
        Ok(self.d2_of(&s.values))
    }

    /// Full reconstruction with diagnostics.
    pub fn reconstruct(&self, s: &StencilValues<S>) -> Result<ReconstructionResult<S>> {
        self.check(s)?;
        let f = &s.values;
        let r = self.r;
        let df = self.diffs(f);
        let mut indicators = vec![S::zero(); r];
        self.indicators_from_diffs(&df, &mut indicators);
        let mut candidates = vec![S::zero(); r];
        self.candidates_into(f, &mut candidates);
        let d1 = self.d1_from_diffs(&df);
        let d2 = self.d2_from_diffs(&df);
        let d = self.global_term(&df);
        let mut w = vec![S::zero(); r];
        weights(&self.ideal, &indicators, d, &self.params, &mut w);
        let value = Self::dot(&w, &candidates);
        Ok(ReconstructionResult { value, weights: w, indicators, candidates, d1, d2, d })
    }

    /// Allocation-free reconstruction of `q(x_{1/2})` from `2r - 1` values.
    ///
    /// The caller guarantees `f.len() >= 2r - 1`.
    #[inline]
    pub fn reconstruct_value(&self, f: &[S]) -> S {
        match self.r {
            3 => self.value_fixed::<3>(f),
            4 => self.value_fixed::<4>(f),
            5 => self.value_fixed::<5>(f),
            _ => self.value_fixed::<6>(f),
        }
    }

    // same arithmetic as the diagnostic path with loop bounds known at
    // compile time
    #[inline(always)]
    fn value_fixed<const R: usize>(&self, f: &[S]) -> S {
        let f = &f[..2 * R - 1];
        let m = R - 1;
        let mut df = [S::zero(); 2 * MAX_R - 2];
        for k in 0..2 * R - 2 {
            df[k] = f[k + 1] - f[k];
        }
        let mut ind = [S::zero(); MAX_R];
        let mut cand = [S::zero(); MAX_R];
        let si = &self.si[..R * m * m];
        let sub = &self.sub[..R * R];
        for i in 0..R {
            let q = &si[i * m * m..(i + 1) * m * m];
            let w = &df[i..i + m];
            let mut acc = S::zero();
            for a in 0..m {
                let mut row = S::zero();
                for b in 0..m {
                    row += q[a * m + b] * w[b];
                }
                acc += w[a] * row;
            }
            ind[i] = acc.max(S::zero());
            let c = &sub[i * R..(i + 1) * R];
            let mut v = S::zero();
            for j in 0..R {
                v += c[j] * f[i + j];
            }
            cand[i] = v;
        }
        let n = 2 * R - 2;
        let d = match self.params.variant {
            Variant::JiangShu | Variant::WenoZ => S::zero(),
            variant => {
                let (c1, c2) = (&self.d1[..n], &self.d2[..3 * n]);
                let (mut t, mut a, mut b, mut c) = (S::zero(), S::zero(), S::zero(), S::zero());
                for k in 0..n {
                    t += c1[k] * df[k];
                    a += c2[k] * df[k];
                    b += c2[n + k] * df[k];
                    c += c2[2 * n + k] * df[k];
                }
                let d1 = t * t;
                if variant == Variant::YamaleevCarpenter {
                    pow_u(d1, self.params.s1 as i32)
                } else {
                    combined_d(d1, b * b - S::from_f64(4.0) * a * c, &self.params)
                }
            }
        };
        let mut w = [S::zero(); MAX_R];
        weights(&self.ideal[..R], &ind[..R], d, &self.params, &mut w[..R]);
        let mut acc = S::zero();
        for i in 0..R {
            acc += w[i] * cand[i];
        }
        acc
    }
}
