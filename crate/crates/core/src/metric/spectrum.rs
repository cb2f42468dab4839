use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::secular::{null_scale, secular_indicator, secular_svd, SecularIndicator};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;

/// Start of the wavenumber scan; the secular matrix is written for `k > 0`.
pub const K_MIN: f64 = 1e-6;
/// Roots below this are folded into the ground state.
pub const K_GROUND: f64 = 1e-5;
/// Singular values below `NULL_TOL * sigma_max` count toward multiplicity.
pub const NULL_TOL: f64 = 1e-7;
/// Refined roots closer than `MERGE_TOL * (1 + k)` are one root.
pub const MERGE_TOL: f64 = 1e-6;
/// Grid steps per mean eigenvalue spacing `pi / L`.
const STEPS_PER_SPACING: f64 = 8.0;
/// Subdivision used when a grid cell's sign parity disagrees with the
/// roots found inside it.
const RESCAN_FACTOR: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub k: f64,
    pub lambda: f64,
    pub multiplicity: usize,
}

/// Eigenvalues of the standard Laplacian, ascending in `k`, starting with
/// the ground state `(0, 0, 1)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    pub warnings: Vec<String>,
}

impl Spectrum {
    pub fn positive(&self) -> impl Iterator<Item = &SpectrumEntry> {
        self.entries.iter().filter(|e| e.k > 0.0)
    }

    /// Eigenvalues repeated according to multiplicity, ground state first.
    pub fn lambdas_with_multiplicity(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.lambda, e.multiplicity))
            .collect()
    }

    /// Positive eigenvalues with `k <= k_max`, counted with multiplicity.
    pub fn count_up_to(&self, k_max: f64) -> usize {
        self.positive()
            .filter(|e| e.k <= k_max)
            .map(|e| e.multiplicity)
            .sum()
    }

    /// CSV with columns `index,k,lambda,multiplicity`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,k,lambda,multiplicity\n");
        for (i, e) in self.entries.iter().enumerate() {
            writeln!(out, "{i},{},{},{}", e.k, e.lambda, e.multiplicity).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct Root {
    k: f64,
    sigma: f64,
}

fn grid_step(g: &MetricGraph) -> f64 {
    PI / (STEPS_PER_SPACING * g.total_length())
}

fn evaluate(g: &MetricGraph, ks: &[f64]) -> Result<Vec<SecularIndicator>> {
    ks.par_iter().map(|&k| secular_indicator(g, k)).collect()
}

fn sigma_min(g: &MetricGraph, k: f64) -> f64 {
    secular_indicator(g, k)
        .map(|s| s.sigma_min)
        .unwrap_or(f64::INFINITY)
}

fn golden_section(g: &MetricGraph, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = sigma_min(g, x1);
    let mut f2 = sigma_min(g, x2);
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * (1.0 + hi.abs()) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = sigma_min(g, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = sigma_min(g, x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

fn bisect_sign(g: &MetricGraph, mut lo: f64, mut hi: f64, sign_lo: i8) -> Result<f64> {
    for _ in 0..200 {
        if hi - lo <= 4.0 * f64::EPSILON * (1.0 + hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let s = secular_indicator(g, mid)?.det_sign;
        if s == 0 {
            return Ok(mid);
        }
        if s == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Candidate roots on one grid: interior local minima of `sigma_min`
/// (golden section) and determinant sign changes (bisection).
fn scan_grid(g: &MetricGraph, ks: &[f64]) -> Result<(Vec<Root>, Vec<i8>)> {
    let ind = evaluate(g, ks)?;
    let signs = ind.iter().map(|s| s.det_sign).collect();
    let mut brackets: Vec<(f64, f64, Option<i8>)> = Vec::new();
    for j in 1..ks.len().saturating_sub(1) {
        if ind[j].sigma_min <= ind[j - 1].sigma_min && ind[j].sigma_min <= ind[j + 1].sigma_min {
            brackets.push((ks[j - 1], ks[j + 1], None));
        }
    }
    for j in 0..ks.len().saturating_sub(1) {
        let (s0, s1) = (ind[j].det_sign, ind[j + 1].det_sign);
        if s0 != 0 && s1 != 0 && s0 != s1 {
            brackets.push((ks[j], ks[j + 1], Some(s0)));
        }
    }
    brackets
        .into_par_iter()
        .map(|(lo, hi, sign)| {
            let k = match sign {
                Some(s) => bisect_sign(g, lo, hi, s)?,
                None => golden_section(g, lo, hi),
            };
            let svd = secular_svd(g, k)?;
            let root = Root {
                k,
                sigma: svd.sigma_min() / null_scale(&svd),
            };
            if sign.is_some() && root.sigma > NULL_TOL {
                return Err(Error::ScanFailure { lo, hi });
            }
            Ok(root)
        })
        .collect::<Result<Vec<_>>>()
        .map(|roots| {
            (
                roots.into_iter().filter(|r| r.sigma <= NULL_TOL).collect(),
                signs,
            )
        })
}

/// Sorts and merges roots closer than `MERGE_TOL`, keeping the best one.
fn merge(mut roots: Vec<Root>) -> Vec<Root> {
    roots.sort_by(|a, b| a.k.total_cmp(&b.k));
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last_mut() {
            Some(last) if (r.k - last.k).abs() <= MERGE_TOL * (1.0 + r.k) => {
                if r.sigma < last.sigma {
                    *last = r;
                }
            }
            _ => out.push(r),
        }
    }
    out
}

fn multiplicity(g: &MetricGraph, k: f64) -> Result<usize> {
    let s = secular_svd(g, k)?;
    let tol = NULL_TOL * null_scale(&s);
    Ok(s.singular_values.iter().filter(|&&x| x <= tol).count())
}

fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil().max(2.0) as usize;
    let h = (hi - lo) / n as f64;
    (0..=n).map(|i| lo + h * i as f64).collect()
}

/// Roots with `lo < k <= hi`, up to `MERGE_TOL` at both ends, each with
/// its multiplicity.
fn scan_window(
    g: &MetricGraph,
    lo: f64,
    hi: f64,
    warnings: &mut Vec<String>,
) -> Result<Vec<SpectrumEntry>> {
    let step = grid_step(g);
    // one extra step on both sides so roots near the window edges sit at
    // interior grid points
    let start = (lo - step).max(K_MIN);
    let ks = uniform_grid(start, hi + step, step);
    let (found, signs) = scan_grid(g, &ks)?;
    let mut roots = merge(found);
    let mut entries = with_multiplicities(g, &roots)?;

    // det M(k) changes sign across a root of odd multiplicity; when the
    // parity disagrees with what was found, rescan that cell more finely
    let mut extra = Vec::new();
    for j in 0..ks.len() - 1 {
        let (a, b) = (ks[j], ks[j + 1]);
        let flips = signs[j] != 0 && signs[j + 1] != 0 && signs[j] != signs[j + 1];
        let found: usize = entries
            .iter()
            .filter(|e| e.k > a && e.k <= b)
            .map(|e| e.multiplicity)
            .sum();
        if (found % 2 == 1) != flips {
            let fine_lo = ks[j.saturating_sub(1)];
            let fine_hi = ks[(j + 2).min(ks.len() - 1)];
            let fine = uniform_grid(fine_lo, fine_hi, step / RESCAN_FACTOR as f64);
            extra.extend(scan_grid(g, &fine)?.0);
        }
    }
    if !extra.is_empty() {
        roots.extend(extra);
        roots = merge(roots);
        entries = with_multiplicities(g, &roots)?;
    }
    for j in 0..ks.len() - 1 {
        let (a, b) = (ks[j], ks[j + 1]);
        let flips = signs[j] != 0 && signs[j + 1] != 0 && signs[j] != signs[j + 1];
        let found: usize = entries
            .iter()
            .filter(|e| e.k > a && e.k <= b)
            .map(|e| e.multiplicity)
            .sum();
        if (found % 2 == 1) != flips {
            warnings.push(format!(
                "determinant sign parity disagrees with {found} root(s) found in ({a}, {b}]"
            ));
        }
    }

    let mut kept = Vec::with_capacity(entries.len());
    for e in entries {
        if e.k < K_GROUND {
            warnings.push(format!(
                "root at k = {:e} folded into the ground state",
                e.k
            ));
        } else if e.k > lo - MERGE_TOL * (1.0 + lo) && e.k <= hi + MERGE_TOL * (1.0 + hi) {
            // a root on a window edge may refine to either side of it
            kept.push(e);
        }
    }
    Ok(kept)
}

fn with_multiplicities(g: &MetricGraph, roots: &[Root]) -> Result<Vec<SpectrumEntry>> {
    roots
        .par_iter()
        .map(|r| {
            Ok(SpectrumEntry {
                k: r.k,
                lambda: r.k * r.k,
                multiplicity: multiplicity(g, r.k)?.max(1),
            })
        })
        .collect()
}

fn ground_state() -> SpectrumEntry {
    SpectrumEntry {
        k: 0.0,
        lambda: 0.0,
        multiplicity: 1,
    }
}

fn require_edges(g: &MetricGraph) -> Result<()> {
    if g.edge_count() == 0 {
        return Err(Error::Empty("graph has no edges"));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// All eigenvalues with `0 < k <= k_max`, ground state prepended.
pub fn eigenvalues(g: &MetricGraph, k_max: f64) -> Result<Spectrum> {
    require_edges(g)?;
    if !(k_max > 0.0 && k_max.is_finite()) {
        return Err(Error::NonPositiveWavenumber(k_max));
    }
    let mut spectrum = Spectrum {
        entries: vec![ground_state()],
        warnings: Vec::new(),
    };
    let found = scan_window(g, 0.0, k_max, &mut spectrum.warnings)?;
    spectrum.entries.extend(found);
    Ok(spectrum)
}

/// First `count` positive eigenvalue entries (distinct `k`), scanning in
/// windows of two mean spacings until enough are found.
pub fn lowest_eigenvalues(g: &MetricGraph, count: usize) -> Result<Spectrum> {
    require_edges(g)?;
    let mut spectrum = Spectrum {
        entries: vec![ground_state()],
        warnings: Vec::new(),
    };
    let width = 2.0 * PI / g.total_length();
    let mut lo = 0.0;
    while spectrum.entries.len() <= count {
        let hi = lo + width;
        for e in scan_window(g, lo, hi, &mut spectrum.warnings)? {
            let last = spectrum.entries.last().expect("ground state").k;
            if e.k - last > MERGE_TOL * (1.0 + e.k) {
                spectrum.entries.push(e);
            }
        }
        lo = hi;
    }
    spectrum.entries.truncate(count + 1);
    Ok(spectrum)
}

/// Compares the eigenvalue count up to `k_max` with `L k_max / pi`; a
/// deficit beyond `N + M + 2` points at missed secular roots.
pub fn weyl_count_check(g: &MetricGraph, spectrum: &Spectrum, k_max: f64) -> bool {
    let count = spectrum.count_up_to(k_max) as f64;
    let weyl = g.total_length() * k_max / PI;
    (count - weyl).abs() <= (g.edge_count() + g.vertex_count() + 2) as f64
}
