//! Group families with their standard symmetric generating sets.
//!
//! Every family has a canonical normal form ([`Element`]) so that equality,
//! hashing and sphere deduplication are all structural. Word lengths are
//! computed in closed form and can be cross-checked against
//! [`GroupSpec::bfs_distance`], which only uses the group law and the
//! generators.

mod bfs;
mod element;
mod law;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use element::{Element, LampState, Letter, Syllable};

use crate::error::{Error, Result};

/// Factor selector for free and direct products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Precondition(format!(
                "factor must be `left` or `right`, got {other:?}"
            ))),
        }
    }
}

/// Handle for one letter of the generating set: an index into
/// [`GroupSpec::generators`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(pub usize);

/// Declarative description of a group together with its generating set.
///
/// Generating sets are fixed per family:
///
/// | family | generators |
/// |---|---|
/// | `Free(r)` | `a_1, a_1⁻¹, …, a_r, a_r⁻¹` |
/// | `FreeAbelian(d)` | `±e_1, …, ±e_d` |
/// | `Cyclic(m)` | `1, m−1` (just `1` when `m = 2`) |
/// | `InfiniteDihedral` | the two involutions `a, b` |
/// | `FreeProduct(G, H)` | generators of `G` then generators of `H` |
/// | `Direct(G, H)` | `(s, 1)` for `s ∈ S_G` then `(1, s)` for `s ∈ S_H` |
/// | `Lamplighter(m)` | `a, a⁻¹, t, t⁻¹` (`a` listed once when `m = 2`) |
///
/// The direct-product generating set is split, so word length is additive
/// across the two coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Free(u32),
    FreeAbelian(u32),
    Cyclic(u32),
    InfiniteDihedral,
    FreeProduct(Box<GroupSpec>, Box<GroupSpec>),
    Direct(Box<GroupSpec>, Box<GroupSpec>),
    Lamplighter(u32),
}

impl GroupSpec {
    pub fn free_product(left: GroupSpec, right: GroupSpec) -> Self {
        GroupSpec::FreeProduct(Box::new(left), Box::new(right))
    }

    pub fn direct(left: GroupSpec, right: GroupSpec) -> Self {
        GroupSpec::Direct(Box::new(left), Box::new(right))
    }

    /// Checks the family parameters recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Free(r) if *r < 1 => Err(Error::InvalidSpec("free rank must be ≥ 1".into())),
            GroupSpec::FreeAbelian(d) if *d < 1 => {
                Err(Error::InvalidSpec("abelian dimension must be ≥ 1".into()))
            }
            GroupSpec::Cyclic(m) if *m < 2 => {
                Err(Error::InvalidSpec("cyclic order must be ≥ 2".into()))
            }
            GroupSpec::Lamplighter(m) if *m < 2 => {
                Err(Error::InvalidSpec("lamp modulus must be ≥ 2".into()))
            }
            GroupSpec::FreeProduct(l, r) | GroupSpec::Direct(l, r) => {
                l.validate()?;
                r.validate()
            }
            _ => Ok(()),
        }
    }

    /// Whether the group is finite. Only cyclic groups and products of them
    /// are.
    pub fn is_finite(&self) -> bool {
        match self {
            GroupSpec::Cyclic(_) => true,
            GroupSpec::Direct(l, r) => l.is_finite() && r.is_finite(),
            _ => false,
        }
    }

    pub fn factor(&self, side: Side) -> Option<&GroupSpec> {
        match self {
            GroupSpec::FreeProduct(l, r) | GroupSpec::Direct(l, r) => Some(match side {
                Side::Left => l,
                Side::Right => r,
            }),
            _ => None,
        }
    }

    /// The generating set, in the fixed order documented on [`GroupSpec`].
    pub fn generators(&self) -> Vec<Element> {
        match self {
            GroupSpec::Free(r) => (1..=*r as Letter).flat_map(|k| [vec![k], vec![-k]]).map(Element::Free).collect(),
            GroupSpec::FreeAbelian(d) => {
                let d = *d as usize;
                (0..d)
                    .flat_map(|k| {
                        [1i64, -1].map(|sign| {
                            let mut v = vec![0; d];
                            v[k] = sign;
                            Element::Abelian(v)
                        })
                    })
                    .collect()
            }
            GroupSpec::Cyclic(2) => vec![Element::Cyclic(1)],
            GroupSpec::Cyclic(m) => vec![Element::Cyclic(1), Element::Cyclic(m - 1)],
            GroupSpec::InfiniteDihedral => vec![
                Element::Dihedral { first: 0, len: 1 },
                Element::Dihedral { first: 1, len: 1 },
            ],
            GroupSpec::FreeProduct(l, r) => {
                let wrap = |side: Side| {
                    move |element: Element| Element::FreeProduct(vec![Syllable { side, element }])
                };
                l.generators()
                    .into_iter()
                    .map(wrap(Side::Left))
                    .chain(r.generators().into_iter().map(wrap(Side::Right)))
                    .collect()
            }
            GroupSpec::Direct(l, r) => {
                let (el, er) = (l.identity(), r.identity());
                l.generators()
                    .into_iter()
                    .map(|g| Element::Pair(Box::new(g), Box::new(er.clone())))
                    .chain(
                        r.generators()
                            .into_iter()
                            .map(|g| Element::Pair(Box::new(el.clone()), Box::new(g))),
                    )
                    .collect()
            }
            GroupSpec::Lamplighter(m) => {
                let lamp = |v: u32| {
                    Element::Lamplighter(LampState {
                        lamps: vec![(0, v)],
                        head: 0,
                    })
                };
                let shift = |head: i64| {
                    Element::Lamplighter(LampState {
                        lamps: Vec::new(),
                        head,
                    })
                };
                let mut gens = vec![lamp(1)];
                if *m > 2 {
                    gens.push(lamp(m - 1));
                }
                gens.push(shift(1));
                gens.push(shift(-1));
                gens
            }
        }
    }

    pub fn generator(&self, g: Generator) -> Result<Element> {
        self.generators()
            .into_iter()
            .nth(g.0)
            .ok_or_else(|| Error::GeneratorOutOfRange {
                spec: self.to_string(),
                index: g.0,
            })
    }

    /// Index of the inverse letter. Involutive generators are their own
    /// inverse.
    pub fn inverse_generator(&self, g: Generator) -> Result<Generator> {
        let gens = self.generators();
        let element = gens.get(g.0).ok_or_else(|| Error::GeneratorOutOfRange {
            spec: self.to_string(),
            index: g.0,
        })?;
        let inv = self.inverse(element)?;
        let index = gens
            .iter()
            .position(|s| *s == inv)
            .expect("generating sets are symmetric");
        Ok(Generator(index))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free(r) => write!(f, "free({r})"),
            GroupSpec::FreeAbelian(d) => write!(f, "abelian({d})"),
            GroupSpec::Cyclic(m) => write!(f, "cyclic({m})"),
            GroupSpec::InfiniteDihedral => f.write_str("dihedral_inf"),
            GroupSpec::FreeProduct(l, r) => write!(f, "free_product({l},{r})"),
            GroupSpec::Direct(l, r) => write!(f, "direct({l},{r})"),
            GroupSpec::Lamplighter(m) => write!(f, "lamplighter({m})"),
        }
    }
}
