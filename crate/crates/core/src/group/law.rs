//! Group law, inverses and closed-form word lengths on canonical forms.

use super::{Element, GroupSpec, LampState, Side, Syllable};
use crate::error::{Error, Result};

impl GroupSpec {
    fn mismatch(&self) -> Error {
        Error::VariantMismatch {
            spec: self.to_string(),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupSpec::Free(_) => Element::Free(Vec::new()),
            GroupSpec::FreeAbelian(d) => Element::Abelian(vec![0; *d as usize]),
            GroupSpec::Cyclic(_) => Element::Cyclic(0),
            GroupSpec::InfiniteDihedral => Element::Dihedral { first: 0, len: 0 },
            GroupSpec::FreeProduct(..) => Element::FreeProduct(Vec::new()),
            GroupSpec::Direct(l, r) => Element::Pair(Box::new(l.identity()), Box::new(r.identity())),
            GroupSpec::Lamplighter(_) => Element::Lamplighter(LampState::default()),
        }
    }

    pub fn is_identity(&self, x: &Element) -> bool {
        match x {
            Element::Free(w) => w.is_empty(),
            Element::Abelian(v) => v.iter().all(|&c| c == 0),
            Element::Cyclic(k) => *k == 0,
            Element::Dihedral { len, .. } => *len == 0,
            Element::FreeProduct(s) => s.is_empty(),
            Element::Pair(a, b) => match self {
                GroupSpec::Direct(l, r) => l.is_identity(a) && r.is_identity(b),
                _ => false,
            },
            Element::Lamplighter(s) => s.lamps.is_empty() && s.head == 0,
        }
    }

    /// Whether `x` is a canonical element of this group.
    pub fn is_canonical(&self, x: &Element) -> bool {
        match (self, x) {
            (GroupSpec::Free(r), Element::Free(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() <= *r)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupSpec::FreeAbelian(d), Element::Abelian(v)) => v.len() == *d as usize,
            (GroupSpec::Cyclic(m), Element::Cyclic(k)) => k < m,
            (GroupSpec::InfiniteDihedral, Element::Dihedral { first, len }) => {
                *first <= 1 && (*len > 0 || *first == 0)
            }
            (GroupSpec::FreeProduct(l, r), Element::FreeProduct(syllables)) => {
                syllables.windows(2).all(|p| p[0].side != p[1].side)
                    && syllables.iter().all(|s| {
                        let factor = if s.side == Side::Left { l } else { r };
                        factor.is_canonical(&s.element) && !factor.is_identity(&s.element)
                    })
            }
            (GroupSpec::Direct(l, r), Element::Pair(a, b)) => l.is_canonical(a) && r.is_canonical(b),
            (GroupSpec::Lamplighter(m), Element::Lamplighter(s)) => {
                s.lamps.windows(2).all(|p| p[0].0 < p[1].0)
                    && s.lamps.iter().all(|&(_, v)| v > 0 && v < *m)
            }
            _ => false,
        }
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        match (self, x, y) {
            (GroupSpec::Free(_), Element::Free(a), Element::Free(b)) => {
                let mut word = a.clone();
                for &l in b {
                    if word.last() == Some(&-l) {
                        word.pop();
                    } else {
                        word.push(l);
                    }
                }
                Ok(Element::Free(word))
            }
            (GroupSpec::FreeAbelian(d), Element::Abelian(a), Element::Abelian(b)) => {
                if a.len() != *d as usize || b.len() != *d as usize {
                    return Err(self.mismatch());
                }
                Ok(Element::Abelian(a.iter().zip(b).map(|(p, q)| p + q).collect()))
            }
            (GroupSpec::Cyclic(m), Element::Cyclic(a), Element::Cyclic(b)) => {
                Ok(Element::Cyclic(((*a as u64 + *b as u64) % *m as u64) as u32))
            }
            (
                GroupSpec::InfiniteDihedral,
                &Element::Dihedral { first: f1, len: l1 },
                &Element::Dihedral { first: f2, len: l2 },
            ) => Ok(dihedral_multiply((f1, l1), (f2, l2))),
            (GroupSpec::FreeProduct(l, r), Element::FreeProduct(a), Element::FreeProduct(b)) => {
                let mut out = a.clone();
                for s in b {
                    match out.last_mut() {
                        Some(last) if last.side == s.side => {
                            let factor = if s.side == Side::Left { l } else { r };
                            let product = factor.multiply(&last.element, &s.element)?;
                            if factor.is_identity(&product) {
                                out.pop();
                            } else {
                                last.element = product;
                            }
                        }
                        _ => out.push(s.clone()),
                    }
                }
                Ok(Element::FreeProduct(out))
            }
            (GroupSpec::Direct(l, r), Element::Pair(a1, b1), Element::Pair(a2, b2)) => Ok(Element::Pair(
                Box::new(l.multiply(a1, a2)?),
                Box::new(r.multiply(b1, b2)?),
            )),
            (GroupSpec::Lamplighter(m), Element::Lamplighter(a), Element::Lamplighter(b)) => {
                Ok(Element::Lamplighter(lamplighter_multiply(*m, a, b)))
            }
            _ => Err(self.mismatch()),
        }
    }

    pub fn inverse(&self, x: &Element) -> Result<Element> {
        match (self, x) {
            (GroupSpec::Free(_), Element::Free(w)) => {
                Ok(Element::Free(w.iter().rev().map(|&l| -l).collect()))
            }
            (GroupSpec::FreeAbelian(_), Element::Abelian(v)) => {
                Ok(Element::Abelian(v.iter().map(|&c| -c).collect()))
            }
            (GroupSpec::Cyclic(m), Element::Cyclic(k)) => Ok(Element::Cyclic((m - k) % m)),
            (GroupSpec::InfiniteDihedral, &Element::Dihedral { first, len }) => {
                Ok(match len {
                    0 => Element::Dihedral { first: 0, len: 0 },
                    _ => Element::Dihedral {
                        first: if len % 2 == 1 { first } else { 1 - first },
                        len,
                    },
                })
            }
            (GroupSpec::FreeProduct(l, r), Element::FreeProduct(syllables)) => syllables
                .iter()
                .rev()
                .map(|s| {
                    let factor = if s.side == Side::Left { l } else { r };
                    Ok(Syllable {
                        side: s.side,
                        element: factor.inverse(&s.element)?,
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map(Element::FreeProduct),
            (GroupSpec::Direct(l, r), Element::Pair(a, b)) => {
                Ok(Element::Pair(Box::new(l.inverse(a)?), Box::new(r.inverse(b)?)))
            }
            (GroupSpec::Lamplighter(m), Element::Lamplighter(s)) => {
                let lamps = s
                    .lamps
                    .iter()
                    .map(|&(p, v)| (p - s.head, (m - v) % m))
                    .collect();
                Ok(Element::Lamplighter(LampState {
                    lamps,
                    head: -s.head,
                }))
            }
            _ => Err(self.mismatch()),
        }
    }

    /// Word length `d(1, x)` with respect to the family's generating set.
    pub fn word_length(&self, x: &Element) -> Result<u64> {
        match (self, x) {
            (GroupSpec::Free(_), Element::Free(w)) => Ok(w.len() as u64),
            (GroupSpec::FreeAbelian(_), Element::Abelian(v)) => {
                Ok(v.iter().map(|c| c.unsigned_abs()).sum())
            }
            (GroupSpec::Cyclic(m), Element::Cyclic(k)) => Ok((*k).min(m - k) as u64),
            (GroupSpec::InfiniteDihedral, Element::Dihedral { len, .. }) => Ok(*len as u64),
            (GroupSpec::FreeProduct(l, r), Element::FreeProduct(syllables)) => {
                syllables.iter().try_fold(0, |acc, s| {
                    let factor = if s.side == Side::Left { l } else { r };
                    Ok(acc + factor.word_length(&s.element)?)
                })
            }
            (GroupSpec::Direct(l, r), Element::Pair(a, b)) => Ok(l.word_length(a)? + r.word_length(b)?),
            (GroupSpec::Lamplighter(m), Element::Lamplighter(s)) => Ok(lamplighter_length(*m, s)),
            _ => Err(self.mismatch()),
        }
    }

    /// Word-metric distance `d(x, y) = |x⁻¹y|`.
    ///
    /// Free groups, free abelian groups, cyclic groups, free products and
    /// direct products are handled without forming `x⁻¹y`.
    pub fn distance(&self, x: &Element, y: &Element) -> Result<u64> {
        match (self, x, y) {
            (GroupSpec::Free(_), Element::Free(a), Element::Free(b)) => {
                let common = common_prefix(a, b);
                Ok((a.len() + b.len() - 2 * common) as u64)
            }
            (GroupSpec::FreeAbelian(d), Element::Abelian(a), Element::Abelian(b))
                if a.len() == *d as usize && b.len() == *d as usize =>
            {
                Ok(a.iter().zip(b).map(|(p, q)| p.abs_diff(*q)).sum())
            }
            (GroupSpec::Cyclic(m), Element::Cyclic(a), Element::Cyclic(b)) => {
                let k = (b + m - a) % m;
                Ok(k.min(m - k) as u64)
            }
            (GroupSpec::FreeProduct(l, r), Element::FreeProduct(a), Element::FreeProduct(b)) => {
                let factor = |side: Side| if side == Side::Left { l } else { r };
                let tail = |s: &[Syllable]| -> Result<u64> {
                    s.iter()
                        .try_fold(0, |acc, s| Ok(acc + factor(s.side).word_length(&s.element)?))
                };
                let common = common_prefix(a, b);
                match (a.get(common), b.get(common)) {
                    (Some(sa), Some(sb)) if sa.side == sb.side => {
                        let middle = factor(sa.side).distance(&sa.element, &sb.element)?;
                        Ok(middle + tail(&a[common + 1..])? + tail(&b[common + 1..])?)
                    }
                    _ => Ok(tail(&a[common..])? + tail(&b[common..])?),
                }
            }
            (GroupSpec::Direct(l, r), Element::Pair(a1, b1), Element::Pair(a2, b2)) => {
                Ok(l.distance(a1, a2)? + r.distance(b1, b2)?)
            }
            _ => self.distance_via_product(x, y),
        }
    }

    /// `|x⁻¹y|` computed literally; the reference path for [`distance`].
    ///
    /// [`distance`]: GroupSpec::distance
    pub fn distance_via_product(&self, x: &Element, y: &Element) -> Result<u64> {
        self.word_length(&self.multiply(&self.inverse(x)?, y)?)
    }
}

fn common_prefix<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).take_while(|(p, q)| p == q).count()
}

fn dihedral_multiply((f1, l1): (u8, u32), (f2, l2): (u8, u32)) -> Element {
    if l1 == 0 {
        return Element::Dihedral { first: f2, len: l2 };
    }
    if l2 == 0 {
        return Element::Dihedral { first: f1, len: l1 };
    }
    let last = if l1 % 2 == 1 { f1 } else { 1 - f1 };
    if last != f2 {
        return Element::Dihedral {
            first: f1,
            len: l1 + l2,
        };
    }
    // Cancellation propagates through min(l1, l2) letters.
    match l1.cmp(&l2) {
        std::cmp::Ordering::Greater => Element::Dihedral {
            first: f1,
            len: l1 - l2,
        },
        std::cmp::Ordering::Less => Element::Dihedral {
            first: if l1 % 2 == 0 { f2 } else { 1 - f2 },
            len: l2 - l1,
        },
        std::cmp::Ordering::Equal => Element::Dihedral { first: 0, len: 0 },
    }
}

/// `(f, p)·(g, q) = (f + g(· − p), p + q)`.
fn lamplighter_multiply(m: u32, a: &LampState, b: &LampState) -> LampState {
    let mut lamps = Vec::with_capacity(a.lamps.len() + b.lamps.len());
    let mut left = a.lamps.iter().copied().peekable();
    let mut right = b.lamps.iter().map(|&(p, v)| (p + a.head, v)).peekable();
    loop {
        let next = match (left.peek(), right.peek()) {
            (Some(&(p, v)), Some(&(q, w))) => {
                if p < q {
                    left.next();
                    (p, v)
                } else if q < p {
                    right.next();
                    (q, w)
                } else {
                    left.next();
                    right.next();
                    (p, (v + w) % m)
                }
            }
            (Some(_), None) => left.next().unwrap(),
            (None, Some(_)) => right.next().unwrap(),
            (None, None) => break,
        };
        if next.1 != 0 {
            lamps.push(next);
        }
    }
    LampState {
        lamps,
        head: a.head + b.head,
    }
}

/// Lamp costs plus the shortest head tour from 0 to the final head position
/// visiting every lit lamp.
fn lamplighter_length(m: u32, s: &LampState) -> u64 {
    let lamp_cost: u64 = s.lamps.iter().map(|&(_, v)| v.min(m - v) as u64).sum();
    let lo = s.lamps.first().map_or(0, |&(p, _)| p).min(0).min(s.head);
    let hi = s.lamps.last().map_or(0, |&(p, _)| p).max(0).max(s.head);
    let span = hi - lo;
    let left_first = -lo + span + (hi - s.head);
    let right_first = hi + span + (s.head - lo);
    lamp_cost + left_first.min(right_first) as u64
}
