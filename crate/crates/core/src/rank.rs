//! Weighted partition sets and their reduction to representative subsets
//! by Gaussian elimination on the cut matrix over GF(2).

use std::collections::{BTreeMap, HashMap};

use crate::cost::Weight;
use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph, Vertex, VertexSet};
use crate::partition::{enumerate_partitions, project_onto, Partition, Universe};

/// Largest universe `reduce` accepts.
pub const MAX_REDUCE_UNIVERSE: usize = 62;

/// Largest universe whose cut matrix is materialized. Each row holds
/// `2^(|U|-1)` bits, so wider universes are refused rather than allocated.
pub const MAX_CUT_MATRIX_UNIVERSE: usize = 26;

/// Largest universe `represents_check` enumerates.
pub const REPRESENTS_CHECK_LIMIT: usize = 6;

/// Payload carried along with each table entry. `()` tracks values only;
/// [`Subgraph`] keeps one explicit partial solution per entry.
pub trait Witness: Clone + Send + Sync {
    fn empty() -> Self;
    fn union(&self, other: &Self) -> Self;
    fn with_edge(&self, u: Vertex, v: Vertex) -> Self;
    fn with_vertex(&self, v: Vertex) -> Self;
    fn from_subgraph(f: &Subgraph) -> Self;
}

impl Witness for () {
    fn empty() -> Self {}
    fn union(&self, _: &Self) -> Self {}
    fn with_edge(&self, _: Vertex, _: Vertex) -> Self {}
    fn with_vertex(&self, _: Vertex) -> Self {}
    fn from_subgraph(_: &Subgraph) -> Self {}
}

impl Witness for Subgraph {
    fn empty() -> Self {
        Subgraph::new()
    }

    fn union(&self, other: &Self) -> Self {
        Subgraph::union(self, other)
    }

    fn with_edge(&self, u: Vertex, v: Vertex) -> Self {
        let mut s = self.clone();
        s.add_edge(u, v);
        s
    }

    fn with_vertex(&self, v: Vertex) -> Self {
        let mut s = self.clone();
        s.add_vertex(v);
        s
    }

    fn from_subgraph(f: &Subgraph) -> Self {
        f.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessedEntry<W = ()> {
    pub partition: Partition,
    pub weight: Weight,
    pub witness: W,
}

/// A set of weighted partitions over one universe holding at most one
/// entry per partition, the cheapest seen. On equal weight the earlier
/// entry stays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPartitionSet<W = ()> {
    universe: Universe,
    entries: BTreeMap<Vec<u64>, (Weight, W)>,
}

impl<W: Clone> WeightedPartitionSet<W> {
    pub fn new(universe: Universe) -> Self {
        WeightedPartitionSet {
            universe,
            entries: BTreeMap::new(),
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inserts unless an entry for `p` is at most as heavy. Returns whether
    /// the set changed.
    pub fn insert(&mut self, p: Partition, weight: Weight, witness: W) -> Result<bool> {
        if *p.universe() != self.universe {
            return Err(Error::invalid(format!(
                "partition {p} does not belong to universe {:?}",
                self.universe
            )));
        }
        Ok(self.insert_masks(p.masks().to_vec(), weight, witness))
    }

    pub(crate) fn insert_unchecked(&mut self, p: &Partition, weight: Weight, witness: W) -> bool {
        debug_assert_eq!(*p.universe(), self.universe);
        self.insert_masks(p.masks().to_vec(), weight, witness)
    }

    fn insert_masks(&mut self, masks: Vec<u64>, weight: Weight, witness: W) -> bool {
        match self.entries.get_mut(&masks) {
            Some(slot) if slot.0 <= weight => false,
            Some(slot) => {
                *slot = (weight, witness);
                true
            }
            None => {
                self.entries.insert(masks, (weight, witness));
                true
            }
        }
    }

    pub fn weight_of(&self, p: &Partition) -> Option<Weight> {
        if *p.universe() != self.universe {
            return None;
        }
        self.entries.get(p.masks()).map(|e| e.0)
    }

    /// Entries in canonical partition order.
    pub fn iter(&self) -> impl Iterator<Item = (Partition, Weight, &W)> + '_ {
        self.entries.iter().map(|(m, (w, x))| {
            (
                Partition::from_masks_unchecked(self.universe.clone(), m.clone()),
                *w,
                x,
            )
        })
    }

    pub fn entries(&self) -> Vec<WitnessedEntry<W>> {
        self.iter()
            .map(|(partition, weight, w)| WitnessedEntry {
                partition,
                weight,
                witness: w.clone(),
            })
            .collect()
    }

    pub fn without_witnesses(&self) -> WeightedPartitionSet<()> {
        WeightedPartitionSet {
            universe: self.universe.clone(),
            entries: self.entries.iter().map(|(m, (w, _))| (m.clone(), (*w, ()))).collect(),
        }
    }

    /// Cheapest entry whose partition joins `q` to the single block.
    pub fn query(&self, q: &Partition) -> Option<(Weight, &W)> {
        self.entries
            .iter()
            .filter(|(m, _)| {
                Partition::from_masks_unchecked(self.universe.clone(), (*m).clone())
                    .join_unchecked(q)
                    .is_single_block()
            })
            .map(|(_, (w, x))| (*w, x))
            .min_by_key(|(w, _)| *w)
    }
}

fn row_of(masks: &[u64], words: usize) -> Vec<u64> {
    let mut row = vec![0u64; words];
    // the first block holds u1 and stays on the V1 side; every other block
    // picks a side independently. Column bit i-1 marks element i in V2.
    let free: Vec<u64> = masks.iter().skip(1).map(|b| b >> 1).collect();
    for choice in 0u64..(1u64 << free.len()) {
        let mut col = 0u64;
        for (j, &b) in free.iter().enumerate() {
            if choice & (1 << j) != 0 {
                col |= b;
            }
        }
        row[(col / 64) as usize] |= 1 << (col % 64);
    }
    row
}

/// Cut-matrix row for `p`, as `2^(|U|-1)` column bits packed into words.
pub fn cut_matrix_row(p: &Partition) -> Vec<u64> {
    let n = p.universe().len();
    let cols = 1usize << n.saturating_sub(1);
    row_of(p.masks(), cols.div_ceil(64))
}

/// A representative subset of at most `2^(|U|-1)` entries.
///
/// Rows are taken in order of weight, then partition, and an entry survives
/// iff its cut-matrix row is independent of the rows kept before it.
pub fn reduce<W: Clone>(a: &WeightedPartitionSet<W>) -> Result<WeightedPartitionSet<W>> {
    let n = a.universe.len();
    if n > MAX_REDUCE_UNIVERSE {
        return Err(Error::TooLarge(format!(
            "reduce handles universes of at most {MAX_REDUCE_UNIVERSE} elements, got {n}"
        )));
    }
    if n > MAX_CUT_MATRIX_UNIVERSE {
        return Err(Error::TooLarge(format!(
            "a cut matrix over {n} elements needs 2^{} columns per row",
            n - 1
        )));
    }
    let cols = 1usize << n.saturating_sub(1);
    if a.entries.len() <= 1 {
        return Ok(a.clone());
    }
    let words = cols.div_ceil(64);
    let mut order: Vec<(&Vec<u64>, &(Weight, W))> = a.entries.iter().collect();
    // stable, so equal weights keep canonical partition order
    order.sort_by_key(|(_, (w, _))| *w);

    let mut basis: HashMap<usize, Vec<u64>> = HashMap::new();
    let mut out = WeightedPartitionSet::new(a.universe.clone());
    for (masks, (w, x)) in order {
        if basis.len() == cols {
            break;
        }
        let mut row = row_of(masks, words);
        let independent = loop {
            let Some(p) = lowest_bit(&row) else {
                break false;
            };
            match basis.get(&p) {
                Some(b) => {
                    for (r, bw) in row.iter_mut().zip(b) {
                        *r ^= bw;
                    }
                }
                None => {
                    basis.insert(p, row);
                    break true;
                }
            }
        };
        if independent {
            out.entries.insert(masks.clone(), (*w, x.clone()));
        }
    }
    Ok(out)
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Brute-force check that `r` represents `a`: for every `Q` the cheapest
/// entry joining `Q` to `{U}` has the same weight in both sets.
pub fn represents_check<W: Clone, V: Clone>(
    a: &WeightedPartitionSet<W>,
    r: &WeightedPartitionSet<V>,
) -> Result<bool> {
    if a.universe != r.universe {
        return Err(Error::invalid("sets are over different universes"));
    }
    let n = a.universe.len();
    if n > REPRESENTS_CHECK_LIMIT {
        return Err(Error::TooLarge(format!(
            "represents_check enumerates universes of at most {REPRESENTS_CHECK_LIMIT} elements, got {n}"
        )));
    }
    Ok(enumerate_partitions(&a.universe)
        .iter()
        .all(|q| a.query(q).map(|e| e.0) == r.query(q).map(|e| e.0)))
}

/// Each subgraph as `(π_F(Z), cost(F))` with min-weight dedup.
pub fn partition_set_of(
    g: &Graph,
    b: &[Subgraph],
    z: &VertexSet,
) -> Result<WeightedPartitionSet<Subgraph>> {
    let universe = Universe::new(z.iter().copied())?;
    let mut set = WeightedPartitionSet::new(universe.clone());
    for f in b {
        let w = f.cost(g)?;
        set.insert_unchecked(&project_onto(f, &universe), w, f.clone());
    }
    Ok(set)
}

/// A representative subset of `b` on `z`, each surviving entry carrying
/// its subgraph.
pub fn reduce_subgraphs(
    g: &Graph,
    b: &[Subgraph],
    z: &VertexSet,
) -> Result<WeightedPartitionSet<Subgraph>> {
    reduce(&partition_set_of(g, b, z)?)
}
