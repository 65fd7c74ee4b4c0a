//! Transition-point diagnostics for free products `A * B` with the union
//! generating set.
//!
//! A geodesic from 1 to `g` is the normal form of `g` read syllable by
//! syllable; every geodesic passes through the same factor cosets in the
//! same order, so a single [`SyllablePath`] describes them all. Both factors
//! are treated as peripheral. With ε = 0 a point is deep in a coset when it
//! sits at least `R` away from both ends of that coset's syllable, and a
//! transition point otherwise.

mod decompose;
mod poincare;

pub use decompose::{
    decompose_counts, decompose_sphere, layer_index, split_offset, Annulus, DecompositionParams,
    DecompositionProfile, DEFAULT_ANNULUS_T,
};
pub use poincare::{poincare_partial, PoincareSeriesReport};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, Side};

/// One syllable of a normal form together with its place along the path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSyllable {
    pub side: Side,
    pub element: Element,
    pub length: u64,
    /// Offset of the syllable's first point (its coset entry).
    pub start: u64,
}

impl PathSyllable {
    pub fn end(&self) -> u64 {
        self.start + self.length
    }
}

/// The geodesic `[1, g]` of a free-product element, split into syllables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyllablePath {
    pub syllables: Vec<PathSyllable>,
    pub total: u64,
}

pub fn syllable_decompose(spec: &GroupSpec, g: &Element) -> Result<SyllablePath> {
    let GroupSpec::FreeProduct(..) = spec else {
        return Err(Error::Unsupported(spec.to_string()));
    };
    let Element::FreeProduct(word) = g else {
        return Err(Error::VariantMismatch { spec: spec.to_string() });
    };
    if !spec.is_canonical(g) {
        return Err(Error::Precondition(format!("element is not in normal form for {spec}")));
    }
    let mut start = 0;
    let mut syllables = Vec::with_capacity(word.len());
    for s in word {
        let length = spec.factor(s.side).unwrap().word_length(&s.element)?;
        syllables.push(PathSyllable {
            side: s.side,
            element: s.element.clone(),
            length,
            start,
        });
        start += length;
    }
    Ok(SyllablePath { syllables, total: start })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Transition,
    Deep { syllable: usize, side: Side },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointClass {
    pub position: u64,
    pub kind: PointKind,
    /// The depth parameter `R` used.
    pub depth: u64,
}

impl PointClass {
    pub fn is_deep(&self) -> bool {
        matches!(self.kind, PointKind::Deep { .. })
    }
}

/// Deep in syllable `j` iff `position − start_j ≥ R` and `end_j − position ≥ R`.
pub fn classify_point(path: &SyllablePath, position: u64, depth: u64) -> Result<PointClass> {
    if depth == 0 {
        return Err(Error::Precondition("depth R must be at least 1".into()));
    }
    if position > path.total {
        return Err(Error::Precondition(format!(
            "position {position} is off a path of length {}",
            path.total
        )));
    }
    let kind = path
        .syllables
        .iter()
        .position(|s| position >= s.start + depth && s.end() >= position + depth)
        .map_or(PointKind::Transition, |j| PointKind::Deep {
            syllable: j,
            side: path.syllables[j].side,
        });
    Ok(PointClass { position, kind, depth })
}
