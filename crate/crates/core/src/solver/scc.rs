use crate::game::{PositionSet, Subgame};

const UNVISITED: u32 = u32::MAX;

/// Strongly connected components of the subgame's move graph.
///
/// Iterative Tarjan; components come out in reverse topological order, so the
/// first one is terminal (no moves leave it). Roots are tried in ascending
/// index order and moves in successor-list order.
pub fn scc_split(g: &Subgame<'_>) -> Vec<PositionSet> {
    tarjan(g, false)
}

/// The first component [`scc_split`] would return, without computing the rest.
pub fn terminal_scc(g: &Subgame<'_>) -> Option<PositionSet> {
    tarjan(g, true).pop()
}

fn tarjan(g: &Subgame<'_>, first_only: bool) -> Vec<PositionSet> {
    let game = g.master();
    let n = game.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = PositionSet::empty(n);
    let mut stack = Vec::with_capacity(g.len());
    let mut next = 0u32;
    let mut out = Vec::new();
    // (position, offset of the next successor to explore)
    let mut frames: Vec<(usize, usize)> = Vec::with_capacity(g.len());

    for root in g.alive().iter() {
        if index[root] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack.insert(root);

        while let Some(&(v, cursor)) = frames.last() {
            let succ = game.successors(v);
            if let Some(&u) = succ.get(cursor) {
                frames.last_mut().expect("non-empty").1 += 1;
                if !g.contains(u) {
                    continue;
                }
                if index[u] == UNVISITED {
                    index[u] = next;
                    low[u] = next;
                    next += 1;
                    stack.push(u);
                    on_stack.insert(u);
                    frames.push((u, 0));
                } else if on_stack.contains(u) {
                    low[v] = low[v].min(index[u]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = PositionSet::empty(n);
                loop {
                    let u = stack.pop().expect("tarjan stack holds the component");
                    on_stack.remove(u);
                    comp.insert(u);
                    if u == v {
                        break;
                    }
                }
                out.push(comp);
                if first_only {
                    return out;
                }
            }
        }
    }
    out
}
