use super::{GroupSpec, Side};
use crate::error::{Error, Result};

/// Signed letter of a free group: `k` is the `k`-th generator (1-based) and
/// `-k` its inverse.
pub type Letter = i32;

/// Canonical normal form of a group element.
///
/// Two elements of the same group are equal iff their normal forms are
/// identical, so the derived `Eq`/`Hash` are the group's equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Freely reduced word.
    Free(Vec<Letter>),
    /// Integer vector.
    Abelian(Vec<i64>),
    /// Residue in `[0, m)`.
    Cyclic(u32),
    /// Reduced alternating word in the involutions `a` (0) and `b` (1):
    /// `len` letters starting with `first`. The identity is `first = 0,
    /// len = 0`.
    Dihedral { first: u8, len: u32 },
    /// Alternating syllables, none trivial.
    FreeProduct(Vec<Syllable>),
    /// Coordinates of a direct-product element.
    Pair(Box<Element>, Box<Element>),
    Lamplighter(LampState),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub side: Side,
    pub element: Element,
}

/// Lamplighter element: finitely many lit lamps (sorted by position, values
/// in `1..m`) and the head position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LampState {
    pub lamps: Vec<(i64, u32)>,
    pub head: i64,
}

impl LampState {
    pub fn lamp(&self, position: i64) -> u32 {
        self.lamps
            .binary_search_by_key(&position, |&(p, _)| p)
            .map(|i| self.lamps[i].1)
            .unwrap_or(0)
    }
}

// Signed integers are written offset-binary so byte order matches numeric
// order.
fn put_i64(out: &mut Vec<u8>, v: i64) {
    out.extend_from_slice(&((v as u64) ^ (1 << 63)).to_be_bytes());
}

fn put_i32(out: &mut Vec<u8>, v: i32) {
    out.extend_from_slice(&((v as u32) ^ (1 << 31)).to_be_bytes());
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_be_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        if self.bytes.len() < n {
            return None;
        }
        let (head, rest) = self.bytes.split_at(n);
        self.bytes = rest;
        Some(head)
    }

    fn u8(&mut self) -> Option<u8> {
        self.take(1).map(|b| b[0])
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_be_bytes(b.try_into().unwrap()))
    }

    fn i32(&mut self) -> Option<i32> {
        self.u32().map(|v| (v ^ (1 << 31)) as i32)
    }

    fn i64(&mut self) -> Option<i64> {
        self.take(8)
            .map(|b| (u64::from_be_bytes(b.try_into().unwrap()) ^ (1 << 63)) as i64)
    }
}

impl Element {
    /// Appends the canonical byte encoding. The group is implicit: decoding
    /// needs the [`GroupSpec`].
    pub fn encode_into(&self, out: &mut Vec<u8>) {
        match self {
            Element::Free(word) => word.iter().for_each(|&l| put_i32(out, l)),
            Element::Abelian(v) => v.iter().for_each(|&x| put_i64(out, x)),
            Element::Cyclic(k) => put_u32(out, *k),
            Element::Dihedral { first, len } => {
                out.push(*first);
                put_u32(out, *len);
            }
            Element::FreeProduct(syllables) => {
                for s in syllables {
                    out.push(s.side.index() as u8);
                    let mut inner = Vec::new();
                    s.element.encode_into(&mut inner);
                    put_u32(out, inner.len() as u32);
                    out.extend_from_slice(&inner);
                }
            }
            Element::Pair(a, b) => {
                let mut inner = Vec::new();
                a.encode_into(&mut inner);
                put_u32(out, inner.len() as u32);
                out.extend_from_slice(&inner);
                b.encode_into(out);
            }
            Element::Lamplighter(state) => {
                put_i64(out, state.head);
                put_u32(out, state.lamps.len() as u32);
                for &(p, v) in &state.lamps {
                    put_i64(out, p);
                    put_u32(out, v);
                }
            }
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    /// Inverse of [`Element::encode`]. Rejects byte strings that do not
    /// decode to a canonical element of `spec`.
    pub fn decode(spec: &GroupSpec, bytes: &[u8]) -> Result<Element> {
        let element = decode_raw(spec, bytes).ok_or_else(|| Error::VariantMismatch {
            spec: spec.to_string(),
        })?;
        if spec.is_canonical(&element) {
            Ok(element)
        } else {
            Err(Error::VariantMismatch {
                spec: spec.to_string(),
            })
        }
    }
}

fn decode_raw(spec: &GroupSpec, bytes: &[u8]) -> Option<Element> {
    let mut r = Reader { bytes };
    let element = match spec {
        GroupSpec::Free(_) => {
            if !bytes.len().is_multiple_of(4) {
                return None;
            }
            let mut word = Vec::with_capacity(bytes.len() / 4);
            while !r.bytes.is_empty() {
                word.push(r.i32()?);
            }
            Element::Free(word)
        }
        GroupSpec::FreeAbelian(d) => {
            let v = (0..*d).map(|_| r.i64()).collect::<Option<Vec<_>>>()?;
            Element::Abelian(v)
        }
        GroupSpec::Cyclic(_) => Element::Cyclic(r.u32()?),
        GroupSpec::InfiniteDihedral => Element::Dihedral {
            first: r.u8()?,
            len: r.u32()?,
        },
        GroupSpec::FreeProduct(left, right) => {
            let mut syllables = Vec::new();
            while !r.bytes.is_empty() {
                let side = match r.u8()? {
                    0 => Side::Left,
                    1 => Side::Right,
                    _ => return None,
                };
                let len = r.u32()? as usize;
                let factor = if side == Side::Left { left } else { right };
                let element = decode_raw(factor, r.take(len)?)?;
                syllables.push(Syllable { side, element });
            }
            Element::FreeProduct(syllables)
        }
        GroupSpec::Direct(left, right) => {
            let len = r.u32()? as usize;
            let a = decode_raw(left, r.take(len)?)?;
            let b = decode_raw(right, std::mem::take(&mut r.bytes))?;
            Element::Pair(Box::new(a), Box::new(b))
        }
        GroupSpec::Lamplighter(_) => {
            let head = r.i64()?;
            let n = r.u32()?;
            let lamps = (0..n)
                .map(|_| Some((r.i64()?, r.u32()?)))
                .collect::<Option<Vec<_>>>()?;
            Element::Lamplighter(LampState { lamps, head })
        }
    };
    r.bytes.is_empty().then_some(element)
}
