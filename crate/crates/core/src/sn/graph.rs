//! Breadth-first reduction graphs over alpha-equivalence classes.

use std::collections::{HashMap, VecDeque};

use super::ample::AmpleChooser;
use crate::reduce::{redexes, step, RedexRef, ReductionTrace};
use crate::term::{CanonId, Interner, Term};

pub type NodeId = usize;

/// The part of `{ u | t ▷* u }` explored so far. Nodes are alpha-classes;
/// the representative of a class is the first term that reached it.
pub struct ReductionGraph {
    interner: Interner,
    index: HashMap<CanonId, NodeId>,
    terms: Vec<Term>,
    /// (index into `redexes(term)`, target); `None` while unexpanded.
    edges: Vec<Option<Vec<(u32, u32)>>>,
    /// BFS tree: the node and redex index through which a node was found.
    parent: Vec<Option<(NodeId, u32)>>,
    queue: VecDeque<NodeId>,
    /// Nodes in this class are never expanded.
    blocked: Option<CanonId>,
    budget_hit: bool,
    /// Set for graphs that follow only ample sets of redexes.
    ample: Option<AmpleChooser>,
}

/// Outcome of one call to [`ReductionGraph::expand_next`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expansion {
    /// A node was expanded; carries its id and the ids of newly added nodes.
    Expanded { node: NodeId, added: Vec<NodeId> },
    /// Nothing left to expand.
    Done,
    /// Expanding the next node would exceed the node budget.
    Budget,
}

impl ReductionGraph {
    pub fn new(root: &Term) -> Self {
        let mut g = ReductionGraph {
            interner: Interner::new(),
            index: HashMap::new(),
            terms: Vec::new(),
            edges: Vec::new(),
            parent: Vec::new(),
            queue: VecDeque::new(),
            blocked: None,
            budget_hit: false,
            ample: None,
        };
        let id = g.interner.intern(root);
        g.add(id, root.clone(), None);
        g
    }

    /// A graph that fires only an ample set of redexes at each node (see
    /// the `ample` module). It has a cycle or an infinite path exactly when
    /// the full graph does, and the same longest path otherwise; it does not
    /// contain every reduct.
    pub fn reduced(root: &Term) -> Self {
        let mut g = ReductionGraph::new(root);
        g.ample = Some(AmpleChooser::new());
        g
    }

    /// True for graphs built with [`ReductionGraph::reduced`].
    pub fn is_reduced(&self) -> bool {
        self.ample.is_some()
    }

    /// A graph in which terms alpha-equal to `stop` are kept as leaves.
    pub fn avoiding(root: &Term, stop: &Term) -> Self {
        let mut g = ReductionGraph::new(root);
        let id = g.interner.intern(stop);
        g.blocked = Some(id);
        if g.index.get(&id) == Some(&0) {
            g.queue.clear();
        }
        g
    }

    fn add(&mut self, id: CanonId, t: Term, parent: Option<(NodeId, u32)>) -> NodeId {
        let n = self.terms.len();
        self.index.insert(id, n);
        self.terms.push(t);
        self.edges.push(None);
        self.parent.push(parent);
        if self.blocked != Some(id) {
            self.queue.push_back(n);
        }
        n
    }

    /// Expands the oldest unexpanded node, unless its new successors would
    /// push the graph past `max_nodes`.
    pub fn expand_next(&mut self, max_nodes: usize) -> Expansion {
        let Some(&u) = self.queue.front() else {
            return Expansion::Done;
        };
        let term = &self.terms[u];
        let rs = redexes(term);
        let chosen: Vec<usize> = match &mut self.ample {
            Some(a) => a.choose(term, &rs),
            None => (0..rs.len()).collect(),
        };
        let succ: Vec<(usize, Term)> = chosen.into_iter().map(|i| (i, step(term, &rs[i]).expect("redex"))).collect();
        let ids: Vec<CanonId> = succ.iter().map(|(_, t)| self.interner.intern(t)).collect();
        let mut fresh: Vec<CanonId> = ids.iter().filter(|id| !self.index.contains_key(id)).copied().collect();
        fresh.sort();
        fresh.dedup();
        if self.terms.len() + fresh.len() > max_nodes {
            self.budget_hit = true;
            return Expansion::Budget;
        }
        self.queue.pop_front();
        let mut added = Vec::new();
        let mut targets = Vec::with_capacity(ids.len());
        for ((i, t), id) in succ.into_iter().zip(ids) {
            let v = match self.index.get(&id) {
                Some(&v) => v,
                None => {
                    let v = self.add(id, t, Some((u, i as u32)));
                    added.push(v);
                    v
                }
            };
            targets.push((i as u32, v as u32));
        }
        self.edges[u] = Some(targets);
        Expansion::Expanded { node: u, added }
    }

    /// Expands until done or out of budget.
    pub fn expand_all(&mut self, max_nodes: usize) {
        while let Expansion::Expanded { .. } = self.expand_next(max_nodes) {}
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().flatten().map(Vec::len).sum()
    }

    pub fn term(&self, n: NodeId) -> &Term {
        &self.terms[n]
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// True once every reachable node (other than blocked ones) is expanded.
    pub fn is_complete(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn budget_exhausted(&self) -> bool {
        self.budget_hit && !self.queue.is_empty()
    }

    pub fn is_expanded(&self, n: NodeId) -> bool {
        self.edges[n].is_some()
    }

    pub fn is_blocked(&self, n: NodeId) -> bool {
        self.blocked.is_some() && !self.is_expanded(n) && !self.queue.contains(&n)
    }

    pub fn frontier(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.queue.iter().copied()
    }

    /// Out-edges of an expanded node as (redex index, target), in redex
    /// order.
    pub fn out(&self, n: NodeId) -> &[(u32, u32)] {
        self.edges[n].as_deref().unwrap_or(&[])
    }

    /// Successor ids of an expanded node, in redex order.
    pub fn targets(&self, n: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.out(n).iter().map(|&(_, v)| v as NodeId)
    }

    pub fn has_self_loop(&self, n: NodeId) -> bool {
        self.targets(n).any(|v| v == n)
    }

    /// Labeled out-edges of an expanded node.
    pub fn edges(&self, n: NodeId) -> Vec<(RedexRef, NodeId)> {
        let rs = redexes(&self.terms[n]);
        self.out(n).iter().map(|&(i, v)| (rs[i as usize].clone(), v as NodeId)).collect()
    }

    /// Expanded and without successors.
    pub fn is_normal(&self, n: NodeId) -> bool {
        matches!(&self.edges[n], Some(t) if t.is_empty())
    }

    pub fn find(&mut self, t: &Term) -> Option<NodeId> {
        let id = self.interner.intern(t);
        self.index.get(&id).copied()
    }

    pub fn contains(&mut self, t: &Term) -> bool {
        self.find(t).is_some()
    }

    /// The BFS-tree reduction from the root to `n` (a shortest one).
    pub fn trace_to(&self, n: NodeId) -> ReductionTrace {
        let mut chain = Vec::new();
        let mut cur = n;
        while let Some((p, i)) = self.parent[cur] {
            chain.push((p, i));
            cur = p;
        }
        chain.reverse();
        let mut tr = ReductionTrace::new(self.terms[0].clone());
        for (p, i) in chain {
            let r = redexes(&self.terms[p])[i as usize].clone();
            let next = crate::reduce::step(tr.last(), &r).expect("graph edge");
            tr.push(r, next);
        }
        tr
    }

    /// Strongly connected components (Tarjan, iterative) of the expanded part.
    /// Returns the component index of every node.
    pub fn components(&self) -> Vec<usize> {
        let n = self.len();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![UNSEEN; n];
        let mut stack = Vec::new();
        let mut next_index = 0;
        let mut next_comp = 0;
        for start in 0..n {
            if index[start] != UNSEEN {
                continue;
            }
            let mut work: Vec<(NodeId, usize)> = vec![(start, 0)];
            index[start] = next_index;
            low[start] = next_index;
            next_index += 1;
            stack.push(start);
            on_stack[start] = true;
            while let Some(&mut (v, ref mut i)) = work.last_mut() {
                let ts = self.out(v);
                if *i < ts.len() {
                    let w = ts[*i].1 as NodeId;
                    *i += 1;
                    if index[w] == UNSEEN {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    work.pop();
                    if let Some(&(p, _)) = work.last() {
                        low[p] = low[p].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            comp[w] = next_comp;
                            if w == v {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                }
            }
        }
        comp
    }

    /// Nodes lying on some cycle of the explored graph.
    pub fn cyclic_nodes(&self) -> Vec<bool> {
        let comp = self.components();
        let mut size = HashMap::new();
        for &c in &comp {
            *size.entry(c).or_insert(0usize) += 1;
        }
        (0..self.len())
            .map(|v| size[&comp[v]] > 1 || self.has_self_loop(v))
            .collect()
    }

    /// A cycle `u ▷ ... ▷ u` in the explored graph, as the node sequence from
    /// `u` back to `u` with the redex index used at each step. Chooses the
    /// cyclic node closest to the root.
    pub fn find_cycle(&self) -> Option<Vec<(NodeId, u32)>> {
        let cyclic = self.cyclic_nodes();
        let comp = self.components();
        let u = (0..self.len()).filter(|&v| cyclic[v]).min_by_key(|&v| self.depth(v))?;
        // BFS inside u's component for the shortest way back to u
        let mut prev: HashMap<NodeId, (NodeId, u32)> = HashMap::new();
        let mut queue = VecDeque::from([u]);
        let mut seen = vec![false; self.len()];
        while let Some(v) = queue.pop_front() {
            for &(i, w) in self.out(v) {
                let w = w as NodeId;
                if comp[w] != comp[u] {
                    continue;
                }
                if w == u {
                    let mut path = vec![(v, i)];
                    let mut cur = v;
                    while cur != u {
                        let (p, j) = prev[&cur];
                        path.push((p, j));
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                if !seen[w] {
                    seen[w] = true;
                    prev.insert(w, (v, i));
                    queue.push_back(w);
                }
            }
        }
        unreachable!("a cyclic node reaches itself")
    }

    pub fn depth(&self, n: NodeId) -> usize {
        let mut d = 0;
        let mut cur = n;
        while let Some((p, _)) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        d
    }

    /// Length of the longest path from the root, when the explored graph is
    /// complete and acyclic.
    pub fn longest_path(&self) -> Option<usize> {
        if !self.is_complete() || self.cyclic_nodes().iter().any(|&c| c) {
            return None;
        }
        // iterative post-order DFS
        let n = self.len();
        let mut best: Vec<Option<usize>> = vec![None; n];
        let mut work = vec![(self.root(), 0usize)];
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            let ts = self.out(v);
            if *i < ts.len() {
                let w = ts[*i].1 as NodeId;
                *i += 1;
                if best[w].is_none() {
                    work.push((w, 0));
                }
            } else {
                let b = ts.iter().map(|&(_, w)| best[w as NodeId].unwrap() + 1).max().unwrap_or(0);
                best[v] = Some(b);
                work.pop();
            }
        }
        best[self.root()]
    }
}

/// Breadth-first closure of `▷` from `t`, stopping before `max_nodes` would
/// be exceeded.
pub fn explore(t: &Term, max_nodes: usize) -> ReductionGraph {
    let mut g = ReductionGraph::new(t);
    g.expand_all(max_nodes);
    g
}

/// Like [`explore`], following ample sets only.
pub fn explore_reduced(t: &Term, max_nodes: usize) -> ReductionGraph {
    let mut g = ReductionGraph::reduced(t);
    g.expand_all(max_nodes);
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn t(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn variable_graph() {
        let g = explore(&t("x"), 10);
        assert_eq!(g.len(), 1);
        assert_eq!(g.edge_count(), 0);
        assert!(g.is_complete());
        assert!(g.is_normal(0));
    }

    #[test]
    fn omega_self_loop() {
        let g = explore(&t(r"(\x.x x) (\x.x x)"), 10);
        assert_eq!(g.len(), 1);
        assert_eq!(g.out(0), &[(0, 0)]);
        assert_eq!(g.find_cycle().unwrap(), vec![(0, 0)]);
        assert_eq!(g.longest_path(), None);
    }

    #[test]
    fn critical_pair_graph() {
        let mut g = explore(&t("(mu a.x) (mu b.y)"), 10);
        assert_eq!(g.len(), 3);
        assert!(g.contains(&t("mu c.x")));
        assert!(g.contains(&t("mu c.y")));
        assert_eq!(g.longest_path(), Some(1));
    }

    #[test]
    fn budget_stops_exploration() {
        // every step grows the term
        let g = explore(&t(r"(\x.x x x) (\x.x x x)"), 3);
        assert!(g.len() <= 3);
        assert!(!g.is_complete());
        assert!(g.budget_exhausted());
    }

    #[test]
    fn trace_to_replays() {
        let g = explore(&t(r"(\x.x) ((\y.y) z)"), 10);
        for n in 0..g.len() {
            let tr = g.trace_to(n);
            assert!(tr.is_valid());
            assert_eq!(tr.last(), g.term(n));
            assert_eq!(tr.len(), g.depth(n));
        }
    }

    #[test]
    fn blocked_nodes_are_leaves() {
        let mut g = ReductionGraph::avoiding(&t(r"(\x.x) ((\y.y) z)"), &t(r"(\y.y) z"));
        g.expand_all(100);
        assert!(g.is_complete());
        let b = g.find(&t(r"(\y.y) z")).unwrap();
        assert!(!g.is_expanded(b));
        assert!(g.is_blocked(b));
        assert!(!g.contains(&t("z")) || g.find(&t("z")).is_some());
    }
}
