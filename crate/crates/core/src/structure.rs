//! Reducibility analysis: irreducibility of a tensor, the representation
//! matrix and weak irreducibility, and the ordered block partition of weakly
//! reducible tensors into leading subtensors.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::scalar::Scalar;
use crate::tensor::SparseTensor;

/// The n×n nonnegative matrix whose (i,j) entry aggregates `|b_{i i_2 ⋯ i_m}|`
/// over entries whose trailing index set contains `j`. An entry contributes
/// once per distinct trailing index, regardless of multiplicity; only the
/// zero pattern matters for the connectivity questions asked of it.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationMatrix<T: Scalar> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> RepresentationMatrix<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    /// Adjacency of the induced digraph: edge `i -> j` iff entry (i,j) > 0.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| self.get(i, j) > T::zero()).collect())
            .collect()
    }

    /// Matrix irreducibility, i.e. strong connectivity of the digraph.
    pub fn is_irreducible(&self) -> bool {
        tarjan_scc(&self.adjacency()).len() == 1
    }
}

/// Builds the representation matrix, taking absolute values first so the
/// construction applies to tensors of any sign.
pub fn representation_matrix<T: Scalar>(t: &SparseTensor<T>) -> RepresentationMatrix<T> {
    let n = t.dim();
    let mut data = vec![T::zero(); n * n];
    let mut seen = vec![usize::MAX; n];
    for (entry_id, (idx, v)) in t.iter().enumerate() {
        let i = idx[0];
        for &j in &idx[1..] {
            if seen[j] != entry_id {
                seen[j] = entry_id;
                data[i * n + j] += v.abs();
            }
        }
    }
    RepresentationMatrix { n, data }
}

/// Tarjan's algorithm; returns the strongly connected components.
fn tarjan_scc(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'g> {
        graph: &'g [Vec<usize>],
        index: usize,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        comps: Vec<Vec<usize>>,
    }

    fn strongconnect(v: usize, st: &mut State) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &st.graph[v] {
            if st.idx[w].is_none() {
                strongconnect(w, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.idx[w].unwrap());
            }
        }
        if st.low[v] == st.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().expect("stack underflow");
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.comps.push(comp);
        }
    }

    let n = graph.len();
    let mut st = State {
        graph,
        index: 0,
        stack: Vec::new(),
        on_stack: vec![false; n],
        idx: vec![None; n],
        low: vec![0; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            strongconnect(v, &mut st);
        }
    }
    st.comps
}

/// True iff no nonempty proper index subset `I` has all entries
/// `b_{i_1 i_2 ⋯ i_m}` zero for `i_1 ∈ I` and every trailing index outside
/// `I`. Checked by fixed-point shrinking from each `n-1`-element superset
/// instead of enumerating subsets.
pub fn is_irreducible<T: Scalar>(t: &SparseTensor<T>) -> bool {
    reducibility_witness(t).is_none()
}

/// A witnessing subset for reducibility, if one exists (0-based, sorted).
pub fn reducibility_witness<T: Scalar>(t: &SparseTensor<T>) -> Option<Vec<usize>> {
    let n = t.dim();
    // rows[i]: trailing index sets of entries rooted at i
    let mut rows: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for (idx, _) in t.iter() {
        let mut trail: Vec<usize> = idx[1..].to_vec();
        trail.sort_unstable();
        trail.dedup();
        rows[idx[0]].push(trail);
    }
    for excluded in 0..n {
        let mut member = vec![true; n];
        member[excluded] = false;
        loop {
            let mut changed = false;
            for i in 0..n {
                if !member[i] {
                    continue;
                }
                // i stays only if every entry rooted at i points back into the set
                let covered = rows[i]
                    .iter()
                    .all(|trail| trail.iter().any(|&j| member[j]));
                if !covered {
                    member[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let witness: Vec<usize> = (0..n).filter(|&i| member[i]).collect();
        if !witness.is_empty() {
            return Some(witness);
        }
    }
    None
}

/// True iff the representation matrix digraph is strongly connected.
pub fn is_weakly_irreducible<T: Scalar>(t: &SparseTensor<T>) -> bool {
    representation_matrix(t).is_irreducible()
}

fn serialize_blocks_one_based<S: Serializer>(
    blocks: &[Vec<usize>],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(blocks.len()))?;
    for block in blocks {
        let shifted: Vec<usize> = block.iter().map(|&i| i + 1).collect();
        seq.serialize_element(&shifted)?;
    }
    seq.end()
}

/// Ordered block partition `I_1, …, I_k` of `{0,…,n-1}`.
///
/// Blocks are the strongly connected components of the representation
/// digraph, listed in a topological order of the condensation (ties broken
/// by smallest contained index), so that every stored entry rooted in block
/// `t` has all trailing indices inside blocks `t..k`. That zero pattern is
/// re-verified entry by entry after construction. Blocks serialize with
/// 1-based indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionReport {
    #[serde(serialize_with = "serialize_blocks_one_based")]
    pub blocks: Vec<Vec<usize>>,
    /// Whether each block's leading subtensor is itself weakly irreducible.
    /// Usually true; an entry rooted in a block can straddle into later
    /// blocks, in which case the leading subtensor loses it and may decompose
    /// further. Callers that need weak irreducibility recurse on such blocks.
    pub block_weakly_irreducible: Vec<bool>,
    pub zero_pattern_ok: bool,
}

impl PartitionReport {
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Block index of each vertex.
    pub fn block_of(&self, n: usize) -> Vec<usize> {
        let mut of = vec![usize::MAX; n];
        for (t, block) in self.blocks.iter().enumerate() {
            for &i in block {
                of[i] = t;
            }
        }
        of
    }
}

/// Partitions the index set into the strongly connected components of the
/// representation digraph, ordered so entries only reference their own or
/// later blocks. Always succeeds; a weakly irreducible tensor yields `k=1`.
pub fn weakly_irreducible_partition<T: Scalar>(t: &SparseTensor<T>) -> PartitionReport {
    let n = t.dim();
    let gm = representation_matrix(t);
    let adj = gm.adjacency();
    let comps = tarjan_scc(&adj);
    let ncomp = comps.len();
    let mut comp_of = vec![usize::MAX; n];
    for (cid, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = cid;
        }
    }
    // condensation: edge cu -> cv when some member of cu references cv
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    let mut indeg = vec![0usize; ncomp];
    for u in 0..n {
        for &v in &adj[u] {
            let (cu, cv) = (comp_of[u], comp_of[v]);
            if cu != cv {
                out[cu].push(cv);
            }
        }
    }
    for edges in &mut out {
        edges.sort_unstable();
        edges.dedup();
    }
    for edges in &out {
        for &cv in edges {
            indeg[cv] += 1;
        }
    }
    // Kahn with a min-heap on the smallest contained index, for determinism
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..ncomp)
        .filter(|&c| indeg[c] == 0)
        .map(|c| Reverse((comps[c][0], c)))
        .collect();
    let mut order = Vec::with_capacity(ncomp);
    while let Some(Reverse((_, c))) = heap.pop() {
        order.push(c);
        for &d in &out[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                heap.push(Reverse((comps[d][0], d)));
            }
        }
    }
    assert_eq!(order.len(), ncomp, "condensation must be acyclic");
    let blocks: Vec<Vec<usize>> = order.iter().map(|&c| comps[c].clone()).collect();

    let report = PartitionReport {
        block_weakly_irreducible: blocks
            .iter()
            .map(|b| is_weakly_irreducible(&t.leading_subtensor(b)))
            .collect(),
        zero_pattern_ok: verify_zero_pattern(t, &blocks),
        blocks,
    };
    // The construction guarantees the pattern; a failure here is a bug.
    assert!(report.zero_pattern_ok, "partition zero pattern violated");
    report
}

fn verify_zero_pattern<T: Scalar>(t: &SparseTensor<T>, blocks: &[Vec<usize>]) -> bool {
    let mut block_of = vec![usize::MAX; t.dim()];
    for (tix, block) in blocks.iter().enumerate() {
        for &i in block {
            block_of[i] = tix;
        }
    }
    if block_of.iter().any(|&b| b == usize::MAX) {
        return false;
    }
    t.iter()
        .all(|(idx, _)| idx[1..].iter().all(|&j| block_of[j] >= block_of[idx[0]]))
}
