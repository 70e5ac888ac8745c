use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{next_part, TripartiteGraph, Vertex};

use super::{edge_key, is_triangle_divisible};

/// Length divisible by 3, distinct vertices, and parts repeating with
/// period 3 around the cycle.
pub fn is_tripartite_cycle(c: &[Vertex]) -> bool {
    let l = c.len();
    if l < 3 || !l.is_multiple_of(3) {
        return false;
    }
    let distinct: HashSet<_> = c.iter().collect();
    distinct.len() == l && (0..l).all(|i| c[i].part != c[(i + 1) % l].part && c[i].part == c[(i + 3) % l].part)
}

/// Whether the cycles are tripartite, edge-disjoint, made of edges of `g`,
/// and together cover every edge of `g`.
pub fn verify_cycle_partition(g: &TripartiteGraph, cycles: &[Vec<Vertex>]) -> bool {
    let mut used = HashSet::new();
    for c in cycles {
        if !is_tripartite_cycle(c) {
            return false;
        }
        for i in 0..c.len() {
            let (a, b) = (c[i], c[(i + 1) % c.len()]);
            if !g.has_edge(a, b) || !used.insert(edge_key(a, b)) {
                return false;
            }
        }
    }
    used.len() == g.edge_count()
}

/// Orients every edge from part `j` to part `j + 1` and peels off cycles:
/// walk along unused out-edges until a vertex repeats, cut the cycle, keep
/// walking. Divisibility makes in- and out-degrees equal, so the walk only
/// stalls at its start.
pub fn decompose_into_tripartite_cycles(l: &TripartiteGraph) -> Result<Vec<Vec<Vertex>>> {
    if !is_triangle_divisible(l) {
        return Err(Error::Precondition("graph is not triangle-divisible".into()));
    }
    let mut out: HashMap<Vertex, Vec<Vertex>> = l
        .vertices()
        .map(|v| {
            let mut ns: Vec<Vertex> = l.neighbors_in(v, next_part(v.part)).collect();
            ns.reverse();
            (v, ns)
        })
        .collect();
    let mut cycles = Vec::new();
    for s in l.vertices() {
        let mut path = vec![s];
        let mut pos: HashMap<Vertex, usize> = HashMap::from([(s, 0)]);
        loop {
            let cur = *path.last().unwrap();
            let Some(nxt) = out.get_mut(&cur).and_then(Vec::pop) else {
                debug_assert_eq!(path.len(), 1);
                break;
            };
            if let Some(&i) = pos.get(&nxt) {
                let cyc = path.split_off(i + 1);
                let mut full = vec![nxt];
                full.extend(cyc);
                for v in &full[1..] {
                    pos.remove(v);
                }
                cycles.push(full);
            } else {
                pos.insert(nxt, path.len());
                path.push(nxt);
            }
        }
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absorb::random_divisible_graph;
    use crate::rng::rng;

    fn cycle_graph(c: &[Vertex], sizes: [usize; 3]) -> TripartiteGraph {
        let mut g = TripartiteGraph::new(sizes);
        for i in 0..c.len() {
            g.add_edge(c[i], c[(i + 1) % c.len()]).unwrap();
        }
        g
    }

    #[test]
    fn six_cycle_is_itself() {
        let c: Vec<Vertex> = (0..6).map(|i| Vertex::new((i % 3) as u8, (i / 3) as u32)).collect();
        assert!(is_tripartite_cycle(&c));
        let g = cycle_graph(&c, [2, 2, 2]);
        assert!(is_triangle_divisible(&g));
        let cs = decompose_into_tripartite_cycles(&g).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].len(), 6);
        assert!(verify_cycle_partition(&g, &cs));
    }

    #[test]
    fn two_triangles() {
        let mut g = TripartiteGraph::new([2, 2, 2]);
        for i in 0..2 {
            let t = [Vertex::new(0, i), Vertex::new(1, i), Vertex::new(2, i)];
            g.add_edge(t[0], t[1]).unwrap();
            g.add_edge(t[1], t[2]).unwrap();
            g.add_edge(t[2], t[0]).unwrap();
        }
        let cs = decompose_into_tripartite_cycles(&g).unwrap();
        assert_eq!(cs.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3]);
    }

    #[test]
    fn random_partitions() {
        let mut r = rng(9);
        for _ in 0..40 {
            let g = random_divisible_graph([5, 5, 5], 5, 4, &mut r);
            let cs = decompose_into_tripartite_cycles(&g).unwrap();
            assert!(verify_cycle_partition(&g, &cs));
        }
    }

    #[test]
    fn rejects_bad_cycles() {
        let v = |p: u8, i: u32| Vertex::new(p, i);
        assert!(!is_tripartite_cycle(&[v(0, 0), v(1, 0)]));
        assert!(!is_tripartite_cycle(&[v(0, 0), v(1, 0), v(0, 1), v(1, 1), v(2, 0), v(2, 1)]));
        assert!(is_tripartite_cycle(&[v(0, 0), v(2, 0), v(1, 0)]));
    }
}
