//! Integer b-flow feasibility on the specialization digraph.
//!
//! A vector lies in the generated submonoid exactly when it is the
//! divergence (inflow minus outflow per node) of a nonnegative integer
//! flow on the generator arcs. Feasibility reduces to max-flow from a
//! super-source feeding the deficit nodes to a super-sink draining the
//! surplus nodes; integral capacities give an integral witness flow.

/// Shortest-augmenting-path max-flow (Edmonds–Karp), sized for carriers of
/// a few dozen nodes.
struct MaxFlow {
    node_count: usize,
    // Arcs stored in pairs: arc 2k is forward, 2k+1 its residual twin.
    heads: Vec<usize>,
    residual: Vec<i64>,
    adjacency: Vec<Vec<usize>>,
}

impl MaxFlow {
    fn new(node_count: usize) -> Self {
        MaxFlow {
            node_count,
            heads: Vec::new(),
            residual: Vec::new(),
            adjacency: vec![Vec::new(); node_count],
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, capacity: i64) -> usize {
        let id = self.heads.len();
        self.heads.push(to);
        self.residual.push(capacity);
        self.adjacency[from].push(id);
        self.heads.push(from);
        self.residual.push(0);
        self.adjacency[to].push(id + 1);
        id
    }

    fn run(&mut self, source: usize, sink: usize) -> i64 {
        let mut total = 0;
        loop {
            // BFS for a shortest residual path.
            let mut parent_arc = vec![usize::MAX; self.node_count];
            let mut queue = std::collections::VecDeque::from([source]);
            let mut seen = vec![false; self.node_count];
            seen[source] = true;
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for &arc in &self.adjacency[u] {
                    let v = self.heads[arc];
                    if !seen[v] && self.residual[arc] > 0 {
                        seen[v] = true;
                        parent_arc[v] = arc;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            // Bottleneck along the path, then push.
            let mut bottleneck = i64::MAX;
            let mut v = sink;
            while v != source {
                let arc = parent_arc[v];
                bottleneck = bottleneck.min(self.residual[arc]);
                v = self.heads[arc ^ 1];
            }
            let mut v = sink;
            while v != source {
                let arc = parent_arc[v];
                self.residual[arc] -= bottleneck;
                self.residual[arc ^ 1] += bottleneck;
                v = self.heads[arc ^ 1];
            }
            total += bottleneck;
        }
    }
}

/// Finds a nonnegative integer flow on `arcs` whose divergence equals
/// `demand` (`demand[v]` = required inflow − outflow at node `v`), or
/// `None` when infeasible. `demand` must sum to zero. Returns per-arc
/// counts aligned with `arcs`.
pub(crate) fn divergence_flow(
    node_count: usize,
    arcs: &[(usize, usize)],
    demand: &[i64],
) -> Option<Vec<u64>> {
    debug_assert_eq!(demand.len(), node_count);
    debug_assert_eq!(demand.iter().sum::<i64>(), 0);
    let surplus: i64 = demand.iter().filter(|&&d| d > 0).sum();
    if surplus == 0 {
        return Some(vec![0; arcs.len()]);
    }
    let source = node_count;
    let sink = node_count + 1;
    let mut net = MaxFlow::new(node_count + 2);
    let arc_ids: Vec<usize> = arcs
        .iter()
        .map(|&(from, to)| net.add_arc(from, to, surplus))
        .collect();
    for (v, &d) in demand.iter().enumerate() {
        if d < 0 {
            net.add_arc(source, v, -d);
        } else if d > 0 {
            net.add_arc(v, sink, d);
        }
    }
    if net.run(source, sink) != surplus {
        return None;
    }
    Some(
        arc_ids
            .iter()
            .map(|&id| (surplus - net.residual[id]) as u64)
            .collect(),
    )
}
