//! Word-metric spheres `S_n = {g : d(1, g) = n}`.
//!
//! Spheres are produced by layered breadth-first search: the next layer is
//! every `x·s` for `x` in the current layer and `s` a generator, minus the
//! current and previous layers (a right multiplication changes word length
//! by at most one, so nothing older can reappear). Split direct products
//! are assembled from their factors, `S_n = ⋃ S_i(G) × S_{n−i}(H)`.

mod cache;
mod counting;
mod growth;
mod sampler;

use std::collections::HashSet;

use rayon::prelude::*;

pub use cache::{load_dataset, read_header, store_dataset, CacheHeader, SphereStore, CACHE_VERSION};
pub use counting::{convolve, FreeProductCounts};
pub use growth::{growth_report, GrowthReport, GrowthRow};
pub(crate) use sampler::{block_rng, SAMPLE_BLOCK};
pub use sampler::{sample_sphere, SphereSampler};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, Side};

/// Default cap on materialized sphere size.
pub const DEFAULT_ELEMENT_CAP: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphereMode {
    Full,
    CountsOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Largest layer (or materialized sphere) the engine will hold.
    pub element_cap: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }
}

/// An enumerated sphere, or just its size in counts-only mode.
///
/// Elements are sorted by their canonical byte encoding; the checksum covers
/// the serialized header and elements, so it doubles as the cache-file
/// trailer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereDataset {
    spec: GroupSpec,
    radius: u32,
    count: u64,
    elements: Option<Vec<Element>>,
    checksum: u64,
}

impl SphereDataset {
    pub fn from_elements(spec: GroupSpec, radius: u32, mut elements: Vec<Element>) -> Self {
        elements.sort_by_cached_key(Element::encode);
        let count = elements.len() as u64;
        let checksum = cache::payload_checksum(&spec, radius, count, Some(&elements));
        SphereDataset {
            spec,
            radius,
            count,
            elements: Some(elements),
            checksum,
        }
    }

    pub fn counts_only(spec: GroupSpec, radius: u32, count: u64) -> Self {
        let checksum = cache::payload_checksum(&spec, radius, count, None);
        SphereDataset {
            spec,
            radius,
            count,
            elements: None,
            checksum,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn checksum(&self) -> u64 {
        self.checksum
    }

    pub fn elements(&self) -> Option<&[Element]> {
        self.elements.as_deref()
    }

    pub fn mode(&self) -> SphereMode {
        if self.elements.is_some() {
            SphereMode::Full
        } else {
            SphereMode::CountsOnly
        }
    }

    /// The element list, or [`Error::CountsOnly`].
    pub fn require_elements(&self) -> Result<&[Element]> {
        self.elements().ok_or_else(|| Error::CountsOnly {
            spec: self.spec.to_string(),
            radius: self.radius,
        })
    }

    pub fn into_elements(self) -> Option<Vec<Element>> {
        self.elements
    }
}

/// Layer-by-layer breadth-first walk over spheres of increasing radius.
///
/// Only the previous and the current layer are retained.
pub struct SphereWalker<'a> {
    spec: &'a GroupSpec,
    generators: Vec<Element>,
    previous: HashSet<Element>,
    current: HashSet<Element>,
    radius: u32,
    cap: u64,
}

impl<'a> SphereWalker<'a> {
    pub fn new(spec: &'a GroupSpec, limits: EnumerationLimits) -> Self {
        SphereWalker {
            spec,
            generators: spec.generators(),
            previous: HashSet::new(),
            current: HashSet::from([spec.identity()]),
            radius: 0,
            cap: limits.element_cap,
        }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn layer_len(&self) -> u64 {
        self.current.len() as u64
    }

    pub fn layer(&self) -> impl Iterator<Item = &Element> {
        self.current.iter()
    }

    pub fn take_layer(self) -> Vec<Element> {
        self.current.into_iter().collect()
    }

    /// Moves to the next radius.
    pub fn advance(&mut self) -> Result<()> {
        let (spec, gens) = (self.spec, &self.generators);
        let (previous, current) = (&self.previous, &self.current);
        let next = current
            .par_iter()
            .fold(HashSet::new, |mut acc, x| {
                for g in gens {
                    let n = spec
                        .multiply(x, g)
                        .expect("walker elements are canonical for their spec");
                    if !current.contains(&n) && !previous.contains(&n) {
                        acc.insert(n);
                    }
                }
                acc
            })
            .reduce(HashSet::new, |a, b| {
                let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
                big.extend(small);
                big
            });
        self.radius += 1;
        if next.len() as u64 > self.cap {
            return Err(Error::BudgetExceeded {
                spec: spec.to_string(),
                radius: self.radius,
                cap: self.cap,
            });
        }
        self.previous = std::mem::replace(&mut self.current, next);
        Ok(())
    }

    pub fn advance_to(&mut self, radius: u32) -> Result<()> {
        while self.radius < radius {
            self.advance()?;
        }
        Ok(())
    }
}

/// `|S_k|` for `k = 0..=n_max` by breadth-first search, ignoring any
/// product structure.
pub fn bfs_sphere_counts(spec: &GroupSpec, n_max: u32, limits: EnumerationLimits) -> Result<Vec<u64>> {
    let mut walker = SphereWalker::new(spec, limits);
    let mut counts = vec![1];
    while walker.radius() < n_max {
        walker.advance()?;
        counts.push(walker.layer_len());
    }
    Ok(counts)
}

/// `|S_k|` for `k = 0..=n_max`. Products are counted from their factors;
/// everything else is walked.
pub fn sphere_counts(spec: &GroupSpec, n_max: u32, limits: EnumerationLimits) -> Result<Vec<u64>> {
    match spec {
        GroupSpec::Direct(l, r) => {
            let left = sphere_counts(l, n_max, limits)?;
            let right = sphere_counts(r, n_max, limits)?;
            let wide = |v: Vec<u64>| v.into_iter().map(u128::from).collect::<Vec<_>>();
            convolve(&wide(left), &wide(right))
                .and_then(|c| c.into_iter().map(|x| u64::try_from(x).ok()).collect())
                .ok_or_else(|| Error::CountOverflow {
                    spec: spec.to_string(),
                    radius: n_max,
                })
        }
        GroupSpec::FreeProduct(l, r) => {
            let wide = |s: &GroupSpec| -> Result<Vec<u128>> {
                Ok(sphere_counts(s, n_max, limits)?.into_iter().map(u128::from).collect())
            };
            FreeProductCounts::new(wide(l)?, wide(r)?)
                .and_then(|c| c.spheres().iter().map(|&x| u64::try_from(x).ok()).collect())
                .ok_or_else(|| Error::CountOverflow {
                    spec: spec.to_string(),
                    radius: n_max,
                })
        }
        _ => bfs_sphere_counts(spec, n_max, limits),
    }
}

/// Every sphere `S_0, …, S_{n_max}` with elements, in no particular order.
fn sphere_layers(spec: &GroupSpec, n_max: u32, limits: EnumerationLimits) -> Result<Vec<Vec<Element>>> {
    match spec {
        GroupSpec::Direct(l, r) => {
            let left = sphere_layers(l, n_max, limits)?;
            let right = sphere_layers(r, n_max, limits)?;
            (0..=n_max as usize)
                .map(|n| direct_sphere(spec, &left, &right, n, limits))
                .collect()
        }
        _ => {
            let mut walker = SphereWalker::new(spec, limits);
            let mut layers = vec![walker.layer().cloned().collect()];
            while walker.radius() < n_max {
                walker.advance()?;
                layers.push(walker.layer().cloned().collect());
            }
            Ok(layers)
        }
    }
}

fn direct_sphere(
    spec: &GroupSpec,
    left: &[Vec<Element>],
    right: &[Vec<Element>],
    n: usize,
    limits: EnumerationLimits,
) -> Result<Vec<Element>> {
    let size: u64 = (0..=n).map(|i| (left[i].len() * right[n - i].len()) as u64).sum();
    if size > limits.element_cap {
        return Err(Error::BudgetExceeded {
            spec: spec.to_string(),
            radius: n as u32,
            cap: limits.element_cap,
        });
    }
    let mut out = Vec::with_capacity(size as usize);
    for i in 0..=n {
        for g in &left[i] {
            for h in &right[n - i] {
                out.push(Element::Pair(Box::new(g.clone()), Box::new(h.clone())));
            }
        }
    }
    Ok(out)
}

/// Enumerates `S_n`.
///
/// In [`SphereMode::Full`] the elements are materialized (refusing spheres
/// larger than the element cap); in counts-only mode only `|S_n|` is kept.
pub fn enumerate_sphere(
    spec: &GroupSpec,
    n: u32,
    mode: SphereMode,
    limits: EnumerationLimits,
) -> Result<SphereDataset> {
    spec.validate()?;
    match mode {
        SphereMode::CountsOnly => {
            let counts = sphere_counts(spec, n, limits)?;
            Ok(SphereDataset::counts_only(spec.clone(), n, counts[n as usize]))
        }
        SphereMode::Full => {
            let elements = match spec {
                GroupSpec::Direct(l, r) => {
                    let left = sphere_layers(l, n, limits)?;
                    let right = sphere_layers(r, n, limits)?;
                    direct_sphere(spec, &left, &right, n as usize, limits)?
                }
                _ => {
                    let mut walker = SphereWalker::new(spec, limits);
                    walker.advance_to(n)?;
                    walker.take_layer()
                }
            };
            Ok(SphereDataset::from_elements(spec.clone(), n, elements))
        }
    }
}

/// `|S_n(P)|` for a free factor `P`, counted in the factor alone (factors
/// embed isometrically in a free product with the union generating set).
pub fn subgroup_sphere_count(spec: &GroupSpec, factor: Side, n: u32, limits: EnumerationLimits) -> Result<u64> {
    Ok(subgroup_sphere_counts(spec, factor, n, limits)?[n as usize])
}

/// `|S_k(P)|` for `k = 0..=n_max`.
pub fn subgroup_sphere_counts(
    spec: &GroupSpec,
    factor: Side,
    n_max: u32,
    limits: EnumerationLimits,
) -> Result<Vec<u64>> {
    match spec {
        GroupSpec::FreeProduct(..) => sphere_counts(spec.factor(factor).unwrap(), n_max, limits),
        _ => Err(Error::Precondition(format!(
            "peripheral sphere counts need a free product, got {spec}"
        ))),
    }
}

/// `|S_{n+m}| ≤ |S_n|·|S_m|` for every `n + m` within the slice.
pub fn is_submultiplicative(counts: &[u64]) -> bool {
    (0..counts.len()).all(|n| {
        (0..counts.len() - n)
            .all(|m| (counts[n + m] as u128) <= counts[n] as u128 * counts[m] as u128)
    })
}
