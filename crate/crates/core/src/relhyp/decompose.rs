//! The layer decomposition `S_n = C_R ⊔ C_{R+1} ⊔ …` around the point at
//! offset `p = round(ρn)`.
//!
//! `g ∈ C_R` when a syllable boundary (a transition point of every
//! geodesic) lies within distance `R` of offset `p`. Otherwise `p` is at
//! least `R + 1` deep inside one syllable, and `g ∈ C_{R+i}` where `R + i`
//! is the distance back to that syllable's entry point.
//!
//! Two routes compute the same profile: classifying an enumerated sphere
//! element by element, and counting normal forms directly from the factor
//! sphere sizes (which reaches radii whose spheres are too large to hold).

use rayon::prelude::*;

use super::{syllable_decompose, SyllablePath};
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, Side};
use crate::sphere::{sphere_counts, EnumerationLimits, FreeProductCounts, SphereDataset};

/// Default inner radius fraction of the annulus used for split products.
pub const DEFAULT_ANNULUS_T: f64 = 0.7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompositionParams {
    pub rho: f64,
    pub big_r: u32,
    /// Annulus fraction; only used for split direct products.
    pub t: f64,
}

impl DecompositionParams {
    pub fn new(rho: f64, big_r: u32) -> Self {
        DecompositionParams {
            rho,
            big_r,
            t: DEFAULT_ANNULUS_T,
        }
    }
}

/// For `G × H`: only pairs whose `G`-coordinate has length at least
/// `min_index = ⌈tn⌉` are kept, and the decomposition runs on that
/// coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub t: f64,
    pub min_index: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionProfile {
    pub spec: GroupSpec,
    pub n: u32,
    pub rho: f64,
    /// `round(ρn)`.
    pub offset: u32,
    pub big_r: u32,
    /// `counts[i] = |C_{R+i}|` for `i = 0..=offset − R`.
    pub counts: Vec<u128>,
    /// `|S_n|`, or the annulus size for split products.
    pub total: u128,
    /// `Σ_{i≥1} |C_{R+i}| / total`.
    pub deep_ratio: f64,
    pub theta: f64,
    /// Stand-in for the ball size `|F|` in `θ`.
    pub f_proxy: u64,
    /// `2(n − ρn − R)` (or `2(⌈tn⌉ − ρn − R)` on an annulus).
    pub d_proxy: i64,
    pub annulus: Option<Annulus>,
}

impl DecompositionProfile {
    /// `Σ_i |C_{R+i}|` equals the total.
    pub fn partition_holds(&self) -> bool {
        self.counts.iter().try_fold(0u128, |a, &c| a.checked_add(c)) == Some(self.total)
    }
}

pub fn split_offset(n: u32, rho: f64) -> u32 {
    (rho * n as f64).round() as u32
}

/// `0` when the path is in `C_R`, otherwise the `i ≥ 1` with the path in
/// `C_{R+i}`.
pub fn layer_index(path: &SyllablePath, offset: u64, big_r: u64) -> u64 {
    path.syllables
        .iter()
        .find(|s| offset > s.start + big_r && s.end() > offset + big_r)
        .map_or(0, |s| offset - s.start - big_r)
}

enum Shape<'a> {
    /// Every point is a transition point; everything lands in `C_R`.
    Trivial,
    Product(&'a GroupSpec),
}

fn shape(spec: &GroupSpec) -> Option<Shape<'_>> {
    match spec {
        GroupSpec::FreeProduct(..) => Some(Shape::Product(spec)),
        GroupSpec::Free(_) => Some(Shape::Trivial),
        _ => None,
    }
}

struct Plan<'a> {
    offset: u32,
    // (left shape, right factor, annulus) for split products.
    split: Option<(Shape<'a>, &'a GroupSpec, Annulus)>,
    shape: Option<Shape<'a>>,
}

fn plan<'a>(spec: &'a GroupSpec, n: u32, params: DecompositionParams) -> Result<Plan<'a>> {
    let DecompositionParams { rho, big_r, t } = params;
    if !(rho > 0.0 && rho < 0.5) {
        return Err(Error::Precondition(format!("ρ must lie in (0, 1/2), got {rho}")));
    }
    if big_r == 0 {
        return Err(Error::Precondition("R must be at least 1".into()));
    }
    let offset = split_offset(n, rho);
    if offset < big_r {
        return Err(Error::Precondition(format!(
            "R = {big_r} exceeds round(ρn) = {offset}"
        )));
    }
    let unsupported = || Error::Unsupported(spec.to_string());
    if let GroupSpec::Direct(l, r) = spec {
        if !(t > rho && t <= 1.0) {
            return Err(Error::Precondition(format!("t must lie in (ρ, 1], got {t}")));
        }
        // Nudge down so that e.g. 0.7·10 lands on 7, not 8.
        let min_index = ((t * n as f64) - 1e-9).ceil().max(0.0) as u32;
        let left = shape(l).ok_or_else(unsupported)?;
        return Ok(Plan {
            offset,
            split: Some((left, r, Annulus { t, min_index })),
            shape: None,
        });
    }
    Ok(Plan {
        offset,
        split: None,
        shape: Some(shape(spec).ok_or_else(unsupported)?),
    })
}

fn wide(counts: Vec<u64>) -> Vec<u128> {
    counts.into_iter().map(u128::from).collect()
}

fn overflow(spec: &GroupSpec, n: u32) -> Error {
    Error::CountOverflow {
        spec: spec.to_string(),
        radius: n,
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    spec: &GroupSpec,
    n: u32,
    params: DecompositionParams,
    offset: u32,
    counts: Vec<u128>,
    total: u128,
    theta_terms: f64,
    annulus: Option<Annulus>,
) -> DecompositionProfile {
    let deep: u128 = counts[1..].iter().sum();
    let outer = annulus.map_or(n, |a| a.min_index) as i64;
    DecompositionProfile {
        spec: spec.clone(),
        n,
        rho: params.rho,
        offset,
        big_r: params.big_r,
        deep_ratio: deep as f64 / total as f64,
        theta: theta_terms / (total as f64 * total as f64),
        counts,
        total,
        f_proxy: 1,
        d_proxy: 2 * (outer - offset as i64 - params.big_r as i64),
        annulus,
    }
}

/// `Σ_i counts[i]·|S_{n−p+R+i}|`.
fn theta_terms(counts: &[u128], spheres: &[u128], n: u32, offset: u32, big_r: u32) -> f64 {
    let base = (n - offset + big_r) as usize;
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| c as f64 * spheres[base + i] as f64)
        .sum()
}

/// Split-product `θ`: `Σ_i Σ_{j ≥ ⌈tn⌉} counts[i]·|S_{j−p+R+i}(G)|·|S_{n−j}(H)|`.
fn annulus_theta_terms(
    counts: &[u128],
    left: &[u128],
    right: &[u128],
    n: u32,
    offset: u32,
    big_r: u32,
    min_index: u32,
) -> f64 {
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            (min_index..=n)
                .map(|j| {
                    let k = (j - offset + big_r) as usize + i;
                    c as f64 * left[k] as f64 * right[(n - j) as usize] as f64
                })
                .sum::<f64>()
        })
        .sum()
}

/// Profile from an enumerated sphere, classifying every element.
pub fn decompose_sphere(
    dataset: &SphereDataset,
    params: DecompositionParams,
    limits: EnumerationLimits,
) -> Result<DecompositionProfile> {
    let spec = dataset.spec();
    let n = dataset.radius();
    let plan = plan(spec, n, params)?;
    let elements = dataset.require_elements()?;
    let (offset, big_r) = (plan.offset as u64, params.big_r as u64);
    let layers = (offset - big_r + 1) as usize;

    // Layer of one free-product (or free) coordinate.
    let classify = |shape: &Shape<'_>, g: &Element| -> Result<usize> {
        match shape {
            Shape::Trivial => Ok(0),
            Shape::Product(fp) => Ok(layer_index(&syllable_decompose(fp, g)?, offset, big_r) as usize),
        }
    };
    let tally = |items: Vec<Result<Option<usize>>>| -> Result<Vec<u128>> {
        let mut counts = vec![0u128; layers];
        for item in items {
            if let Some(i) = item? {
                counts[i] += 1;
            }
        }
        Ok(counts)
    };

    match &plan.split {
        None => {
            let shape = plan.shape.as_ref().unwrap();
            let counts = tally(elements.par_iter().map(|g| classify(shape, g).map(Some)).collect())?;
            let spheres = wide(sphere_counts(spec, n, limits)?);
            let theta = theta_terms(&counts, &spheres, n, plan.offset, params.big_r);
            Ok(finish(spec, n, params, plan.offset, counts, elements.len() as u128, theta, None))
        }
        Some((left_shape, right, annulus)) => {
            let GroupSpec::Direct(left, _) = spec else { unreachable!() };
            let counts = tally(
                elements
                    .par_iter()
                    .map(|x| {
                        let Element::Pair(g, _) = x else {
                            return Err(Error::VariantMismatch { spec: spec.to_string() });
                        };
                        if left.word_length(g)? < annulus.min_index as u64 {
                            return Ok(None);
                        }
                        classify(left_shape, g).map(Some)
                    })
                    .collect(),
            )?;
            let total = counts.iter().sum();
            let (gs, hs) = (wide(sphere_counts(left, n, limits)?), wide(sphere_counts(right, n, limits)?));
            let theta = annulus_theta_terms(&counts, &gs, &hs, n, plan.offset, params.big_r, annulus.min_index);
            Ok(finish(spec, n, params, plan.offset, counts, total, theta, Some(*annulus)))
        }
    }
}

/// `|C_{R+i}|` among normal forms of length `len`, counted from the tables.
///
/// A form is in `C_{R+i}` (`i ≥ 1`) iff it has a syllable on some side `X`
/// that starts at `o = p − R − i` and has length `L ≥ 2R + i + 1`; the
/// prefix before it must not end on `X` and the suffix after it must not
/// start on `X`.
fn layer_counts(fp: &FreeProductCounts, len: u32, offset: u32, big_r: u32) -> Option<Vec<u128>> {
    let len = len as usize;
    let mut counts = vec![0u128; (offset - big_r + 1) as usize];
    for (i, slot) in counts.iter_mut().enumerate().skip(1) {
        let reach = big_r as usize + i;
        let start = offset as usize - reach;
        for side in Side::BOTH {
            for l in (reach + big_r as usize + 1)..=(len - start) {
                let term = fp
                    .tail(side, start)
                    .checked_mul(fp.factor_count(side, l))?
                    .checked_mul(fp.tail(side, len - start - l))?;
                *slot = slot.checked_add(term)?;
            }
        }
    }
    let deep = counts.iter().try_fold(0u128, |a, &c| a.checked_add(c))?;
    counts[0] = fp.sphere(len).checked_sub(deep)?;
    Some(counts)
}

fn product_tables(spec: &GroupSpec, n: u32, limits: EnumerationLimits) -> Result<FreeProductCounts> {
    let GroupSpec::FreeProduct(l, r) = spec else { unreachable!() };
    FreeProductCounts::new(wide(sphere_counts(l, n, limits)?), wide(sphere_counts(r, n, limits)?))
        .ok_or_else(|| overflow(spec, n))
}

/// Per-length layer counts for one coordinate shape.
fn shape_counts(
    shape: &Shape<'_>,
    spec: &GroupSpec,
    len: u32,
    offset: u32,
    big_r: u32,
    tables: Option<&FreeProductCounts>,
    spheres: &[u128],
) -> Result<Vec<u128>> {
    match shape {
        Shape::Trivial => {
            let mut counts = vec![0u128; (offset - big_r + 1) as usize];
            counts[0] = spheres[len as usize];
            Ok(counts)
        }
        Shape::Product(_) => {
            layer_counts(tables.unwrap(), len, offset, big_r).ok_or_else(|| overflow(spec, len))
        }
    }
}

/// Profile counted from factor sphere sizes, without enumerating `S_n`.
pub fn decompose_counts(
    spec: &GroupSpec,
    n: u32,
    params: DecompositionParams,
    limits: EnumerationLimits,
) -> Result<DecompositionProfile> {
    spec.validate()?;
    let plan = plan(spec, n, params)?;
    let big_r = params.big_r;
    match &plan.split {
        None => {
            let shape = plan.shape.as_ref().unwrap();
            let tables = match shape {
                Shape::Product(fp) => Some(product_tables(fp, n, limits)?),
                Shape::Trivial => None,
            };
            let spheres = match &tables {
                Some(t) => t.spheres().to_vec(),
                None => wide(sphere_counts(spec, n, limits)?),
            };
            let counts = shape_counts(shape, spec, n, plan.offset, big_r, tables.as_ref(), &spheres)?;
            let theta = theta_terms(&counts, &spheres, n, plan.offset, big_r);
            Ok(finish(spec, n, params, plan.offset, counts, spheres[n as usize], theta, None))
        }
        Some((left_shape, right, annulus)) => {
            let GroupSpec::Direct(left, _) = spec else { unreachable!() };
            let tables = match left_shape {
                Shape::Product(fp) => Some(product_tables(fp, n, limits)?),
                Shape::Trivial => None,
            };
            let gs = match &tables {
                Some(t) => t.spheres().to_vec(),
                None => wide(sphere_counts(left, n, limits)?),
            };
            let hs = wide(sphere_counts(right, n, limits)?);
            let mut counts = vec![0u128; (plan.offset - big_r + 1) as usize];
            for j in annulus.min_index..=n {
                let at_j = shape_counts(left_shape, left, j, plan.offset, big_r, tables.as_ref(), &gs)?;
                for (c, x) in counts.iter_mut().zip(at_j) {
                    *c = x
                        .checked_mul(hs[(n - j) as usize])
                        .and_then(|v| c.checked_add(v))
                        .ok_or_else(|| overflow(spec, n))?;
                }
            }
            let total = counts.iter().try_fold(0u128, |a, &c| a.checked_add(c)).ok_or_else(|| overflow(spec, n))?;
            let theta = annulus_theta_terms(&counts, &gs, &hs, n, plan.offset, big_r, annulus.min_index);
            Ok(finish(spec, n, params, plan.offset, counts, total, theta, Some(*annulus)))
        }
    }
}
