//! Random Selection Strategy: spanning-tree positive sampling over a
//! disjoint-set forest.
//!
//! For every label class of size `C >= 2` the sampler emits exactly `C - 1`
//! anchor/positive pairs. Each anchor picks, uniformly at random, a
//! same-class sample whose component differs from its own, then the two
//! components are merged. The pairs therefore form a spanning tree of the
//! class: every member ends up connected, and no pair is redundant.

use crate::error::{Error, Result};
use crate::numkit::Rng;

/// Union-find forest with union by rank and path compression.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
    components: usize,
}

impl DisjointSet {
    /// Forest of `size` singletons.
    pub fn new(size: usize) -> Self {
        Self {
            parent: (0..size).collect(),
            rank: vec![0; size],
            components: size,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of distinct components.
    pub fn components(&self) -> usize {
        self.components
    }

    /// Canonical root of `i`, compressing the path along the way.
    pub fn find(&mut self, i: usize) -> Result<usize> {
        if i >= self.parent.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.parent.len(),
            });
        }
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        Ok(root)
    }

    /// Merge the components of `a` and `b`. Returns `true` when a merge
    /// happened (roots differed), `false` when they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> Result<bool> {
        let ra = self.find(a)?;
        let rb = self.find(b)?;
        if ra == rb {
            return Ok(false);
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.components -= 1;
        Ok(true)
    }
}

/// Anchor/positive index pairs chosen by the Random Selection Strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSelection {
    /// `(anchor, positive)` in batch indices, same label on both sides.
    pub pairs: Vec<(usize, usize)>,
    /// Labels whose class had fewer than 2 samples and produced no pairs.
    pub skipped_classes: Vec<u8>,
}

impl PairSelection {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }
}

/// Select one positive per anchor within each label class.
///
/// Anchors are visited in ascending sample index; the last member of a class
/// is never an anchor. The candidate set for an anchor is every same-class
/// sample outside the anchor's current component, materialized as a sorted
/// index list before the uniform draw.
pub fn select_positives(labels: &[u8], rng: &mut Rng) -> Result<PairSelection> {
    let mut classes: Vec<(u8, Vec<usize>)> = Vec::new();
    for (idx, &label) in labels.iter().enumerate() {
        match classes.iter_mut().find(|(l, _)| *l == label) {
            Some((_, members)) => members.push(idx),
            None => classes.push((label, vec![idx])),
        }
    }
    classes.sort_by_key(|(l, _)| *l);

    let mut ds = DisjointSet::new(labels.len());
    let mut pairs = Vec::new();
    let mut skipped_classes = Vec::new();
    for (label, members) in &classes {
        if members.len() < 2 {
            skipped_classes.push(*label);
            continue;
        }
        // Members are in ascending index order by construction.
        for &anchor in members.iter().take(members.len() - 1) {
            let anchor_root = ds.find(anchor)?;
            let mut candidates = Vec::with_capacity(members.len());
            for &other in members {
                if ds.find(other)? != anchor_root {
                    candidates.push(other);
                }
            }
            let positive = rng.choice(&candidates)?;
            debug_assert_ne!(ds.find(anchor)?, ds.find(positive)?);
            pairs.push((anchor, positive));
            ds.union(anchor, positive)?;
        }
    }
    Ok(PairSelection {
        pairs,
        skipped_classes,
    })
}
