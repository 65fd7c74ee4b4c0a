//! Uniform sampling from spheres.
//!
//! Free groups, free abelian groups and products of samplable groups have
//! direct samplers driven by exact sphere counts; every other family samples
//! from enumerated spheres.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{EnumerationLimits, FreeProductCounts, SphereDataset, SphereWalker};
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, Letter, Side, Syllable};

/// Draws per pseudorandom stream. Stream `b` of a seed always covers draws
/// `b·SAMPLE_BLOCK ..`, so results do not depend on the thread count.
pub(crate) const SAMPLE_BLOCK: u64 = 4096;

pub(crate) fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Uniform sampler for the spheres `S_0 … S_{max_radius}` of one group.
#[derive(Clone, Debug)]
pub struct SphereSampler {
    spec: GroupSpec,
    counts: Vec<Option<u128>>,
    law: Law,
}

#[derive(Clone, Debug)]
enum Law {
    Free { rank: u32 },
    // table[d][m] = lattice points of ℤ^d with L1 norm m.
    Abelian { table: Vec<Vec<u128>> },
    Listed(Vec<Option<Vec<Element>>>),
    FreeProduct { factors: Box<[SphereSampler; 2]>, counts: FreeProductCounts },
    Direct { factors: Box<[SphereSampler; 2]> },
}

impl SphereSampler {
    /// Builds a sampler covering radii `0..=max_radius`, enumerating spheres
    /// for families without a direct sampler.
    pub fn new(spec: &GroupSpec, max_radius: u32, limits: EnumerationLimits) -> Result<Self> {
        spec.validate()?;
        let overflow = || Error::CountOverflow {
            spec: spec.to_string(),
            radius: max_radius,
        };
        let n = max_radius as usize;
        let (law, counts): (Law, Vec<u128>) = match spec {
            GroupSpec::Free(rank) => {
                let letters = 2 * *rank as u128;
                let mut counts = vec![1u128];
                let mut c = letters;
                for k in 1..=n {
                    if k > 1 {
                        c = c.checked_mul(letters - 1).ok_or_else(overflow)?;
                    }
                    counts.push(c);
                }
                (Law::Free { rank: *rank }, counts)
            }
            GroupSpec::FreeAbelian(dim) => {
                let mut table = vec![(0..=n).map(|m| u128::from(m == 0)).collect::<Vec<_>>()];
                for d in 1..=*dim as usize {
                    let prev = &table[d - 1];
                    let row = (0..=n)
                        .map(|m| {
                            (1..=m).try_fold(prev[m], |acc, j| acc.checked_add(prev[m - j].checked_mul(2)?))
                        })
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(overflow)?;
                    table.push(row);
                }
                let counts = table[*dim as usize].clone();
                (Law::Abelian { table }, counts)
            }
            GroupSpec::FreeProduct(l, r) => {
                let factors = Box::new([
                    SphereSampler::new(l, max_radius, limits)?,
                    SphereSampler::new(r, max_radius, limits)?,
                ]);
                let table = FreeProductCounts::new(factors[0].all_counts()?, factors[1].all_counts()?)
                    .ok_or_else(overflow)?;
                let counts = table.spheres().to_vec();
                (Law::FreeProduct { factors, counts: table }, counts)
            }
            GroupSpec::Direct(l, r) => {
                let factors = Box::new([
                    SphereSampler::new(l, max_radius, limits)?,
                    SphereSampler::new(r, max_radius, limits)?,
                ]);
                let counts = super::convolve(&factors[0].all_counts()?, &factors[1].all_counts()?)
                    .ok_or_else(overflow)?;
                (Law::Direct { factors }, counts)
            }
            GroupSpec::Cyclic(_) | GroupSpec::InfiniteDihedral | GroupSpec::Lamplighter(_) => {
                let mut walker = SphereWalker::new(spec, limits);
                let mut layers = Vec::with_capacity(n + 1);
                loop {
                    let mut layer: Vec<Element> = walker.layer().cloned().collect();
                    layer.sort_by_cached_key(Element::encode);
                    layers.push(Some(layer));
                    if walker.radius() >= max_radius {
                        break;
                    }
                    walker.advance()?;
                }
                let counts = layers.iter().map(|l| l.as_ref().unwrap().len() as u128).collect();
                (Law::Listed(layers), counts)
            }
        };
        Ok(SphereSampler {
            spec: spec.clone(),
            counts: counts.into_iter().map(Some).collect(),
            law,
        })
    }

    /// Sampler over a single enumerated sphere.
    pub fn from_dataset(dataset: &SphereDataset) -> Result<Self> {
        let elements = dataset.require_elements()?.to_vec();
        let radius = dataset.radius() as usize;
        let mut counts = vec![None; radius + 1];
        counts[radius] = Some(elements.len() as u128);
        let mut lists = vec![None; radius + 1];
        lists[radius] = Some(elements);
        Ok(SphereSampler {
            spec: dataset.spec().clone(),
            counts,
            law: Law::Listed(lists),
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn max_radius(&self) -> u32 {
        (self.counts.len() - 1) as u32
    }

    fn unavailable(&self, n: u32) -> Error {
        Error::NoSampler {
            spec: self.spec.to_string(),
            radius: n,
        }
    }

    /// `|S_n|`.
    pub fn count(&self, n: u32) -> Result<u128> {
        self.counts
            .get(n as usize)
            .copied()
            .flatten()
            .ok_or_else(|| self.unavailable(n))
    }

    fn all_counts(&self) -> Result<Vec<u128>> {
        (0..=self.max_radius()).map(|n| self.count(n)).collect()
    }

    /// One uniform draw from `S_n`.
    pub fn sample<R: Rng + ?Sized>(&self, n: u32, rng: &mut R) -> Result<Element> {
        let total = self.count(n)?;
        if total == 0 {
            return Err(Error::Precondition(format!("S_{n} of {} is empty", self.spec)));
        }
        let m = n as usize;
        Ok(match &self.law {
            Law::Free { rank } => {
                let letter = |i: u32| -> Letter {
                    let k = (i / 2 + 1) as Letter;
                    if i.is_multiple_of(2) {
                        k
                    } else {
                        -k
                    }
                };
                let letters = 2 * rank;
                let mut word: Vec<Letter> = Vec::with_capacity(m);
                for _ in 0..m {
                    let next = match word.last() {
                        None => letter(rng.random_range(0..letters)),
                        Some(&prev) => {
                            // Uniform over the letters other than prev⁻¹.
                            let i = rng.random_range(0..letters - 1);
                            let l = letter(i);
                            if l == -prev {
                                letter(letters - 1)
                            } else {
                                l
                            }
                        }
                    };
                    word.push(next);
                }
                Element::Free(word)
            }
            Law::Abelian { table } => {
                let dim = table.len() - 1;
                let mut remaining = m;
                let mut point = vec![0i64; dim];
                for (c, coord) in point.iter_mut().enumerate() {
                    let rest = &table[dim - c - 1];
                    let mut u = rng.random_range(0..table[dim - c][remaining]);
                    let mut chosen = None;
                    for j in 0..=remaining {
                        let w = if j == 0 { rest[remaining] } else { 2 * rest[remaining - j] };
                        if u < w {
                            chosen = Some(j);
                            break;
                        }
                        u -= w;
                    }
                    let j = chosen.expect("weights sum to the table entry");
                    let sign = if j > 0 && rng.random_bool(0.5) { -1 } else { 1 };
                    *coord = sign * j as i64;
                    remaining -= j;
                }
                Element::Abelian(point)
            }
            Law::Listed(lists) => {
                let list = lists[m].as_ref().ok_or_else(|| self.unavailable(n))?;
                list[rng.random_range(0..list.len())].clone()
            }
            Law::FreeProduct { factors, counts } => {
                let mut syllables = Vec::new();
                let mut remaining = m;
                let mut forbidden: Option<Side> = None;
                while remaining > 0 {
                    let allowed: &[Side] = match forbidden {
                        None => &Side::BOTH,
                        Some(Side::Left) => &[Side::Right],
                        Some(Side::Right) => &[Side::Left],
                    };
                    let total = match forbidden {
                        None => counts.sphere(remaining),
                        Some(side) => counts.tail(side, remaining),
                    };
                    let mut u = rng.random_range(0..total);
                    let mut chosen = None;
                    'pick: for &side in allowed {
                        for k in 1..=remaining {
                            let w = counts.factor_count(side, k) * counts.tail(side, remaining - k);
                            if u < w {
                                chosen = Some((side, k));
                                break 'pick;
                            }
                            u -= w;
                        }
                    }
                    let (side, k) = chosen.expect("weights sum to the tail count");
                    let element = factors[side.index()].sample(k as u32, rng)?;
                    syllables.push(Syllable { side, element });
                    remaining -= k;
                    forbidden = Some(side);
                }
                Element::FreeProduct(syllables)
            }
            Law::Direct { factors } => {
                let mut u = rng.random_range(0..total);
                let mut split = None;
                for i in 0..=n {
                    let w = factors[0].count(i)? * factors[1].count(n - i)?;
                    if u < w {
                        split = Some(i);
                        break;
                    }
                    u -= w;
                }
                let i = split.expect("weights sum to the sphere count");
                Element::Pair(
                    Box::new(factors[0].sample(i, rng)?),
                    Box::new(factors[1].sample(n - i, rng)?),
                )
            }
        })
    }
}

/// `k` independent uniform draws from `S_n`, reproducible from `seed`.
pub fn sample_sphere(sampler: &SphereSampler, n: u32, k: u64, seed: u64) -> Result<Vec<Element>> {
    sampler.count(n)?;
    let blocks = k.div_ceil(SAMPLE_BLOCK);
    let chunks = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b);
            let len = SAMPLE_BLOCK.min(k - b * SAMPLE_BLOCK);
            (0..len).map(|_| sampler.sample(n, &mut rng)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}
