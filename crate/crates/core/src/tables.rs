//! Exact-rational coefficient tables for reconstructions of order `2r - 1`.
//!
//! The full stencil holds the values `f_{-r+1}, ..., f_{r-1}` on nodes
//! `w = -r+1, ..., r-1` (in units of the mesh width, centred on `x_0`), and
//! the reconstruction target is `w = 1/2`. Substencil `i` covers nodes
//! `-r+1+i ..= i`. Right-biased reconstructions reuse these tables on
//! mirrored data.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat, rational_inverse, rational_solve, Rational};

pub const MIN_R: usize = 3;
pub const MAX_R: usize = 6;

const FORMAT_HEADER: &str = "# oweno scheme tables v1";

/// How the stencil data relate to the underlying function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataMode {
    PointValues,
    CellAverages,
}

impl DataMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DataMode::PointValues => "point",
            DataMode::CellAverages => "cell",
        }
    }
}

impl fmt::Display for DataMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DataMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "point" | "points" | "point-values" | "pointvalues" => Ok(DataMode::PointValues),
            "cell" | "cells" | "cell-averages" | "cellaverages" => Ok(DataMode::CellAverages),
            other => Err(format!("unknown data mode `{other}` (expected `point` or `cell`)")),
        }
    }
}

/// Every coefficient a reconstruction of order `2r - 1` needs.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeTables {
    pub r: usize,
    pub mode: DataMode,
    /// `sub_coeffs[i]` gives `p_i(1/2)` from the `r` values of substencil `i`.
    pub sub_coeffs: Vec<Vec<Rational>>,
    pub ideal_weights: Vec<Rational>,
    /// `si_forms[i]` is the symmetric matrix `Q_i` with `I_i = f^T Q_i f`
    /// over the values of substencil `i`.
    pub si_forms: Vec<Vec<Vec<Rational>>>,
    /// Signed binomials of the undivided difference of order `2r - 2`.
    pub d1_coeffs: Vec<Rational>,
    /// Functionals for `A`, `B`, `C` of the parabola `P^{(2r-4)}(w) = A w^2 + B w + C`.
    pub d2_functionals: [Vec<Rational>; 3],
    /// Order `2r - 1` reconstruction at `w = 1/2` from the full stencil.
    pub full_coeffs: Vec<Rational>,
}

fn check_order(r: usize) -> Result<()> {
    if (MIN_R..=MAX_R).contains(&r) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder { r })
    }
}

fn pow_i(base: i64, e: usize) -> Rational {
    Rational::from_integer(BigInt::from(base).pow(e as u32))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Interpolation condition that the monomial `w^k` contributes at `node`.
fn monomial_condition(mode: DataMode, node: i64, k: usize) -> Rational {
    match mode {
        DataMode::PointValues => pow_i(node, k),
        DataMode::CellAverages => {
            // Mean of w^k over [node - 1/2, node + 1/2].
            let right = num_traits::pow(Rational::from_integer(BigInt::from(2 * node + 1)) / rat(2, 1), k + 1);
            let left = num_traits::pow(Rational::from_integer(BigInt::from(2 * node - 1)) / rat(2, 1), k + 1);
            (right - left) / rat(k as i64 + 1, 1)
        }
    }
}

/// Rows of the inverse interpolation matrix: entry `[k][j]` is the weight of
/// datum `j` in the `w^k` coefficient of the interpolant on `nodes`.
pub fn monomial_functionals(mode: DataMode, nodes: &[i64]) -> Result<Vec<Vec<Rational>>> {
    let n = nodes.len();
    let v: Vec<Vec<Rational>> = nodes
        .iter()
        .map(|&x| (0..n).map(|k| monomial_condition(mode, x, k)).collect())
        .collect();
    rational_inverse(&v)
}

fn value_at_half(functionals: &[Vec<Rational>]) -> Vec<Rational> {
    let n = functionals[0].len();
    let mut out = vec![Rational::zero(); n];
    let mut power = Rational::one();
    for row in functionals {
        for (o, c) in out.iter_mut().zip(row) {
            *o += &power * c;
        }
        power /= rat(2, 1);
    }
    out
}

fn substencil_nodes(r: usize, i: usize) -> Vec<i64> {
    let lo = -(r as i64) + 1 + i as i64;
    (lo..=i as i64).collect()
}

fn full_nodes(r: usize) -> Vec<i64> {
    let r = r as i64;
    (-r + 1..r).collect()
}

/// Exact Jiang-Shu quadratic forms, one per substencil.
///
/// With `x = x_0 + w h` each term `h^{2l-1} \int (p^{(l)})^2 dx` becomes
/// `\int_{-1/2}^{1/2} (P^{(l)}(w))^2 dw`, so the forms carry no mesh width.
pub fn si_forms_from_integration(r: usize, mode: DataMode) -> Result<Vec<Vec<Vec<Rational>>>> {
    check_order(r)?;
    // \int_{-1/2}^{1/2} w^m dw
    let moment = |m: usize| -> Rational {
        if m % 2 == 1 {
            Rational::zero()
        } else {
            Rational::one() / (Rational::from_integer(BigInt::from(m + 1)) * pow_i(2, m))
        }
    };
    (0..r)
        .map(|i| {
            let l0 = monomial_functionals(mode, &substencil_nodes(r, i))?;
            let mut q = vec![vec![Rational::zero(); r]; r];
            for l in 1..r {
                // Coefficient functionals of P^{(l)}: entry m multiplies w^m.
                let deriv: Vec<Vec<Rational>> = (l..r)
                    .map(|k| {
                        let f = Rational::from_integer(factorial(k) / factorial(k - l));
                        l0[k].iter().map(|c| c * &f).collect()
                    })
                    .collect();
                for (p, dp) in deriv.iter().enumerate() {
                    for (s, ds) in deriv.iter().enumerate() {
                        let g = moment(p + s);
                        if g.is_zero() {
                            continue;
                        }
                        for a in 0..r {
                            let ga = &g * &dp[a];
                            for b in 0..r {
                                q[a][b] += &ga * &ds[b];
                            }
                        }
                    }
                }
            }
            Ok(q)
        })
        .collect()
}

/// Builds every table for `3 <= r <= 6` in exact arithmetic.
pub fn build_tables(r: usize, mode: DataMode) -> Result<SchemeTables> {
    check_order(r)?;
    let width = 2 * r - 1;

    let sub_coeffs: Vec<Vec<Rational>> = (0..r)
        .map(|i| monomial_functionals(mode, &substencil_nodes(r, i)).map(|f| value_at_half(&f)))
        .collect::<Result<_>>()?;

    let full = monomial_functionals(mode, &full_nodes(r))?;
    let full_coeffs = value_at_half(&full);

    let ideal_weights = ideal_weights(r, mode, &sub_coeffs, &full_coeffs)?;

    let n = width - 1;
    let s = n - 2;
    // L^{s,j} = (s+j)!/j! L^{0,s+j}
    let lfun = |j: usize| -> Vec<Rational> {
        let f = Rational::from_integer(factorial(s + j) / factorial(j));
        full[s + j].iter().map(|c| c * &f).collect()
    };
    let d2_functionals = [lfun(2), lfun(1), lfun(0)];

    let d1_coeffs = (0..width)
        .map(|m| {
            let b = binomial(BigInt::from(n), BigInt::from(m));
            let b = if m % 2 == 1 { -b } else { b };
            Rational::from_integer(b)
        })
        .collect();

    Ok(SchemeTables {
        r,
        mode,
        sub_coeffs,
        ideal_weights,
        si_forms: si_forms_from_integration(r, mode)?,
        d1_coeffs,
        d2_functionals,
        full_coeffs,
    })
}

/// Solves for `c` with `sum_i c_i p_i(1/2) = p_full(1/2)` on monomials
/// `1, w^r, ..., w^{2r-2}` (lower monomials are reproduced by every `p_i`).
fn ideal_weights(
    r: usize,
    mode: DataMode,
    sub_coeffs: &[Vec<Rational>],
    full_coeffs: &[Rational],
) -> Result<Vec<Rational>> {
    let full_nodes = full_nodes(r);
    let apply = |coeffs: &[Rational], nodes: &[i64], k: usize| -> Rational {
        coeffs
            .iter()
            .zip(nodes)
            .map(|(c, &x)| c * monomial_condition(mode, x, k))
            .sum()
    };
    let mut rows = vec![vec![Rational::one(); r]];
    let mut rhs = vec![Rational::one()];
    for k in r..=2 * r - 2 {
        rows.push(
            (0..r)
                .map(|i| apply(&sub_coeffs[i], &substencil_nodes(r, i), k))
                .collect(),
        );
        rhs.push(apply(full_coeffs, &full_nodes, k));
    }
    rational_solve(&rows, &rhs)
}

impl SchemeTables {
    pub fn width(&self) -> usize {
        2 * self.r - 1
    }

    /// `sub_coeffs[i]` placed at its offset in the full stencil.
    pub fn padded_sub_coeffs(&self, i: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.width()];
        for (j, c) in self.sub_coeffs[i].iter().enumerate() {
            out[i + j] = c.clone();
        }
        out
    }

    /// Checks the structural invariants that hold in exact arithmetic.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let sum: Rational = self.ideal_weights.iter().sum();
        if !sum.is_one() {
            return Err(format!("ideal weights sum to {sum}"));
        }
        if let Some(c) = self.ideal_weights.iter().find(|c| !c.is_positive()) {
            return Err(format!("non-positive ideal weight {c}"));
        }
        let mut combo = vec![Rational::zero(); self.width()];
        for (i, c) in self.ideal_weights.iter().enumerate() {
            for (o, s) in combo.iter_mut().zip(self.padded_sub_coeffs(i)) {
                *o += c * s;
            }
        }
        if combo != self.full_coeffs {
            return Err("ideal weights do not recombine into the full-stencil coefficients".into());
        }
        for (i, q) in self.si_forms.iter().enumerate() {
            for a in 0..self.r {
                for b in 0..self.r {
                    if q[a][b] != q[b][a] {
                        return Err(format!("Q_{i} is not symmetric"));
                    }
                }
                let row: Rational = q[a].iter().sum();
                if !row.is_zero() {
                    return Err(format!("Q_{i} does not annihilate constants"));
                }
            }
        }
        let annihilates = |v: &[Rational]| v.iter().sum::<Rational>().is_zero();
        if !annihilates(&self.d1_coeffs) || !self.d2_functionals.iter().all(|f| annihilates(f)) {
            return Err("d1/d2 functionals do not annihilate constants".into());
        }
        Ok(())
    }

    /// Serializes to the line-oriented `group index: num/den ...` format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |v: &[Rational]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
        out.push_str(FORMAT_HEADER);
        out.push('\n');
        out.push_str(&format!("r: {}\nmode: {}\n", self.r, self.mode));
        for (i, c) in self.sub_coeffs.iter().enumerate() {
            out.push_str(&format!("sub {i}: {}\n", join(c)));
        }
        out.push_str(&format!("ideal: {}\n", join(&self.ideal_weights)));
        for (i, q) in self.si_forms.iter().enumerate() {
            let flat: Vec<Rational> = q.iter().flatten().cloned().collect();
            out.push_str(&format!("si {i}: {}\n", join(&flat)));
        }
        out.push_str(&format!("d1: {}\n", join(&self.d1_coeffs)));
        for (name, f) in ["A", "B", "C"].iter().zip(&self.d2_functionals) {
            out.push_str(&format!("d2.{name}: {}\n", join(f)));
        }
        out.push_str(&format!("full: {}\n", join(&self.full_coeffs)));
        out
    }

    /// Parses the output of [`SchemeTables::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::TableFormat { line, message };
        let mut r = None;
        let mut mode = None;
        let mut sub = Vec::new();
        let mut ideal = None;
        let mut si = Vec::new();
        let mut d1 = None;
        let mut d2: [Option<Vec<Rational>>; 3] = [None, None, None];
        let mut full = None;
        let mut saw_header = false;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('#') {
                saw_header |= line == FORMAT_HEADER;
                continue;
            }
            let (key, values) = line
                .split_once(':')
                .ok_or_else(|| err(line_no, "missing `:`".into()))?;
            let values = values.trim();
            let parse_list = || -> Result<Vec<Rational>> {
                values
                    .split_whitespace()
                    .map(|t| {
                        t.parse::<Rational>()
                            .map_err(|e| err(line_no, format!("bad rational `{t}`: {e}")))
                    })
                    .collect()
            };
            let mut parts = key.split_whitespace();
            let group = parts.next().unwrap_or("");
            let index = parts
                .next()
                .map(|s| s.parse::<usize>().map_err(|e| err(line_no, format!("bad index: {e}"))))
                .transpose()?;
            match (group, index) {
                ("r", None) => {
                    r = Some(values.parse::<usize>().map_err(|e| err(line_no, e.to_string()))?)
                }
                ("mode", None) => mode = Some(values.parse::<DataMode>().map_err(|e| err(line_no, e))?),
                ("sub", Some(i)) => {
                    if i != sub.len() {
                        return Err(err(line_no, format!("expected sub {}", sub.len())));
                    }
                    sub.push(parse_list()?);
                }
                ("ideal", None) => ideal = Some(parse_list()?),
                ("si", Some(i)) => {
                    if i != si.len() {
                        return Err(err(line_no, format!("expected si {}", si.len())));
                    }
                    si.push(parse_list()?);
                }
                ("d1", None) => d1 = Some(parse_list()?),
                ("d2.A", None) => d2[0] = Some(parse_list()?),
                ("d2.B", None) => d2[1] = Some(parse_list()?),
                ("d2.C", None) => d2[2] = Some(parse_list()?),
                ("full", None) => full = Some(parse_list()?),
                _ => return Err(err(line_no, format!("unknown group `{key}`"))),
            }
        }
        if !saw_header {
            return Err(err(1, "missing version header".into()));
        }
        let last = text.lines().count();
        let missing = |what: &str| err(last, format!("missing `{what}`"));
        let r = r.ok_or_else(|| missing("r"))?;
        check_order(r)?;
        let width = 2 * r - 1;
        let check_len = |v: &[Rational], n: usize, what: &str| -> Result<()> {
            if v.len() == n {
                Ok(())
            } else {
                Err(err(last, format!("`{what}` has {} entries, expected {n}", v.len())))
            }
        };
        if sub.len() != r || si.len() != r {
            return Err(err(last, "wrong number of substencil groups".into()));
        }
        for s in &sub {
            check_len(s, r, "sub")?;
        }
        let si_forms = si
            .into_iter()
            .map(|flat| {
                check_len(&flat, r * r, "si")?;
                Ok(flat.chunks(r).map(|c| c.to_vec()).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let ideal = ideal.ok_or_else(|| missing("ideal"))?;
        check_len(&ideal, r, "ideal")?;
        let d1 = d1.ok_or_else(|| missing("d1"))?;
        check_len(&d1, width, "d1")?;
        let [a, b, c] = d2;
        let a = a.ok_or_else(|| missing("d2.A"))?;
        let b = b.ok_or_else(|| missing("d2.B"))?;
        let c = c.ok_or_else(|| missing("d2.C"))?;
        for v in [&a, &b, &c] {
            check_len(v, width, "d2")?;
        }
        let full = full.ok_or_else(|| missing("full"))?;
        check_len(&full, width, "full")?;
        Ok(SchemeTables {
            r,
            mode: mode.ok_or_else(|| missing("mode"))?,
            sub_coeffs: sub,
            ideal_weights: ideal,
            si_forms,
            d1_coeffs: d1,
            d2_functionals: [a, b, c],
            full_coeffs: full,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn d2_functionals_point_values_r3() {
        let t = build_tables(3, DataMode::PointValues).unwrap();
        assert_eq!(t.d2_functionals[0], qs(&[(1, 2), (-2, 1), (3, 1), (-2, 1), (1, 2)]));
        assert_eq!(t.d2_functionals[1], qs(&[(-1, 2), (1, 1), (0, 1), (-1, 1), (1, 2)]));
        assert_eq!(
            t.d2_functionals[2],
            qs(&[(-1, 12), (4, 3), (-5, 2), (4, 3), (-1, 12)])
        );
    }

    #[test]
    fn d2_functionals_cell_averages_r3() {
        let t = build_tables(3, DataMode::CellAverages).unwrap();
        let p = build_tables(3, DataMode::PointValues).unwrap();
        assert_eq!(t.d2_functionals[0], p.d2_functionals[0]);
        assert_eq!(t.d2_functionals[1], p.d2_functionals[1]);
        assert_eq!(
            t.d2_functionals[2],
            qs(&[(-1, 8), (3, 2), (-11, 4), (3, 2), (-1, 8)])
        );
    }

    #[test]
    fn d1_is_signed_binomial() {
        for mode in [DataMode::PointValues, DataMode::CellAverages] {
            let t = build_tables(3, mode).unwrap();
            assert_eq!(t.d1_coeffs, qs(&[(1, 1), (-4, 1), (6, 1), (-4, 1), (1, 1)]));
        }
    }

    #[test]
    fn classical_weno5_ideal_weights() {
        let cell = build_tables(3, DataMode::CellAverages).unwrap();
        assert_eq!(cell.ideal_weights, qs(&[(1, 10), (3, 5), (3, 10)]));
        assert_eq!(cell.sub_coeffs[0], qs(&[(1, 3), (-7, 6), (11, 6)]));
        let point = build_tables(3, DataMode::PointValues).unwrap();
        assert_eq!(point.ideal_weights, qs(&[(1, 16), (5, 8), (5, 16)]));
    }

    #[test]
    fn classical_jiang_shu_form_r3() {
        // beta_0 = 13/12 (f0 - 2f1 + f2)^2 + 1/4 (f0 - 4f1 + 3f2)^2 on (f_{-2}, f_{-1}, f_0)
        let t = build_tables(3, DataMode::CellAverages).unwrap();
        let a = [1i64, -2, 1];
        let b = [1i64, -4, 3];
        let expected: Vec<Vec<Rational>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| rat(13 * a[i] * a[j], 12) + rat(b[i] * b[j], 4))
                    .collect()
            })
            .collect();
        assert_eq!(t.si_forms[0], expected);
    }

    #[test]
    fn invariants_hold_for_supported_range() {
        for r in MIN_R..=MAX_R {
            for mode in [DataMode::PointValues, DataMode::CellAverages] {
                let t = build_tables(r, mode).unwrap();
                t.check_invariants().unwrap_or_else(|e| panic!("r={r} {mode}: {e}"));
            }
        }
    }

    #[test]
    fn unsupported_orders_rejected() {
        assert_eq!(build_tables(2, DataMode::PointValues), Err(Error::UnsupportedOrder { r: 2 }));
        assert_eq!(build_tables(7, DataMode::CellAverages), Err(Error::UnsupportedOrder { r: 7 }));
    }

    #[test]
    fn text_roundtrip() {
        let t = build_tables(4, DataMode::CellAverages).unwrap();
        let text = t.to_text();
        assert!(text.contains("d1: 1 -6 15 -20 15 -6 1"));
        assert_eq!(SchemeTables::from_text(&text).unwrap(), t);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let t = build_tables(3, DataMode::PointValues).unwrap();
        let text = t.to_text().replace("d1: 1 -4", "d1: 1 x4");
        match SchemeTables::from_text(&text) {
            Err(Error::TableFormat { line, .. }) => assert_eq!(line, 11),
            other => panic!("unexpected {other:?}"),
        }
    }
}
