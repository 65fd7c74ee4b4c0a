use std::collections::HashMap;

use super::{Element, GroupSpec};
use crate::error::{Error, Result};

impl GroupSpec {
    /// Graph distance in the Cayley graph by bidirectional breadth-first
    /// search, using nothing but [`GroupSpec::multiply`] and the generators.
    ///
    /// Returns `None` when the distance exceeds `cap`. This is the oracle the
    /// closed-form [`GroupSpec::word_length`] is validated against.
    pub fn bfs_distance(&self, x: &Element, y: &Element, cap: u64) -> Result<Option<u64>> {
        if !self.is_canonical(x) || !self.is_canonical(y) {
            return Err(Error::VariantMismatch {
                spec: self.to_string(),
            });
        }
        if x == y {
            return Ok(Some(0));
        }
        let gens = self.generators();
        let mut sides = [Search::new(x.clone()), Search::new(y.clone())];
        while sides[0].depth + sides[1].depth < cap {
            let grow = usize::from(sides[1].frontier.len() < sides[0].frontier.len());
            let [a, b] = &mut sides;
            let (this, other) = if grow == 0 { (a, b) } else { (b, a) };
            if this.frontier.is_empty() {
                break;
            }
            let depth = this.depth + 1;
            let mut next = Vec::new();
            let mut best: Option<u64> = None;
            for f in std::mem::take(&mut this.frontier) {
                for g in &gens {
                    let n = self.multiply(&f, g)?;
                    if this.seen.contains_key(&n) {
                        continue;
                    }
                    if let Some(&o) = other.seen.get(&n) {
                        best = Some(best.map_or(depth + o, |b| b.min(depth + o)));
                    }
                    this.seen.insert(n.clone(), depth);
                    next.push(n);
                }
            }
            this.frontier = next;
            this.depth = depth;
            // Both balls were disjoint before this layer, so the first meeting
            // layer already yields the exact distance.
            if let Some(d) = best {
                return Ok((d <= cap).then_some(d));
            }
        }
        Ok(None)
    }
}

struct Search {
    seen: HashMap<Element, u64>,
    frontier: Vec<Element>,
    depth: u64,
}

impl Search {
    fn new(start: Element) -> Self {
        Search {
            seen: HashMap::from([(start.clone(), 0)]),
            frontier: vec![start],
            depth: 0,
        }
    }
}
