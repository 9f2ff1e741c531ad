//! Genus checks by face counting over rotation systems.
//!
//! A rotation system fixes a cyclic order of neighbors at every vertex and
//! determines a cellular embedding with `F` faces, whose Euler genus is
//! `(2 - V + E - F) / 2`. The minimum over all rotation systems is the
//! orientable genus.

use planarize::generators::{complete_graph, genus_chain, toroidal_grid};
use planarize::Graph;

/// Faces of the embedding given by `rot[v]`, a cyclic order of the
/// neighbors of `v`.
fn face_count(n: usize, rot: &[Vec<usize>]) -> usize {
    let pos = |v: usize, u: usize| rot[v].iter().position(|&x| x == u).unwrap();
    let mut used: Vec<Vec<bool>> = (0..n).map(|v| vec![false; rot[v].len()]).collect();
    let mut faces = 0;
    for u in 0..n {
        for i in 0..rot[u].len() {
            if used[u][i] {
                continue;
            }
            faces += 1;
            let (mut a, mut b) = (u, rot[u][i]);
            loop {
                let ia = pos(a, b);
                if used[a][ia] {
                    break;
                }
                used[a][ia] = true;
                let j = (pos(b, a) + 1) % rot[b].len();
                (a, b) = (b, rot[b][j]);
            }
        }
    }
    faces
}

fn genus_of(g: &Graph, faces: usize) -> usize {
    let chi = g.n() as isize - g.m() as isize + faces as isize;
    assert_eq!((2 - chi) % 2, 0);
    ((2 - chi) / 2) as usize
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Smallest genus over every rotation system.
fn exhaustive_genus(g: &Graph) -> usize {
    // fixing the first neighbor leaves (d - 1)! cyclic orders per vertex
    let choices: Vec<Vec<Vec<usize>>> = (0..g.n())
        .map(|v| {
            let nb: Vec<usize> = g.neighbors(v).iter().map(|&(u, _)| u).collect();
            permutations(&nb[1..])
                .into_iter()
                .map(|mut p| {
                    p.insert(0, nb[0]);
                    p
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; g.n()];
    let mut best = usize::MAX;
    loop {
        let rot: Vec<Vec<usize>> = (0..g.n()).map(|v| choices[v][idx[v]].clone()).collect();
        best = best.min(genus_of(g, face_count(g.n(), &rot)));
        let mut v = 0;
        while v < g.n() {
            idx[v] += 1;
            if idx[v] < choices[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
        if v == g.n() {
            return best;
        }
    }
}

/// Right, down, left, up around every grid vertex.
fn torus_rotation(m: usize, k: usize) -> Vec<Vec<usize>> {
    (0..m * k)
        .map(|v| {
            let (i, j) = (v / k, v % k);
            vec![
                i * k + (j + 1) % k,
                ((i + 1) % m) * k + j,
                i * k + (j + k - 1) % k,
                ((i + m - 1) % m) * k + j,
            ]
        })
        .collect()
}

#[test]
fn k5_has_genus_one() {
    assert_eq!(exhaustive_genus(&complete_graph(5).unwrap()), 1);
}

#[test]
fn k4_has_genus_zero() {
    assert_eq!(exhaustive_genus(&complete_graph(4).unwrap()), 0);
}

#[test]
fn k33_has_genus_one() {
    let mut g = Graph::new(6);
    for a in 0..3 {
        for b in 3..6 {
            g.add_edge(a, b, 1.0).unwrap();
        }
    }
    assert_eq!(exhaustive_genus(&g), 1);
}

#[test]
fn torus_rotation_has_euler_characteristic_zero() {
    for (m, k) in [(3, 3), (3, 4), (4, 5), (7, 7)] {
        let g = toroidal_grid(m, k).unwrap();
        let rot = torus_rotation(m, k);
        for (v, r) in rot.iter().enumerate() {
            let mut a = r.clone();
            a.sort_unstable();
            let mut b: Vec<usize> = g.neighbors(v).iter().map(|&(u, _)| u).collect();
            b.sort_unstable();
            assert_eq!(a, b, "rotation at {v} is not the neighborhood");
        }
        let faces = face_count(g.n(), &rot);
        assert_eq!(faces, m * k);
        assert_eq!(genus_of(&g, faces), 1);
    }
}

#[test]
fn chain_embeds_with_genus_g() {
    // a torus rotation per block; bridges just extend a face at each end
    let (copies, m, k) = (3, 3, 4);
    let g = genus_chain(copies, m, k).unwrap();
    let block = m * k;
    let mut rot: Vec<Vec<usize>> = Vec::new();
    for c in 0..copies {
        for r in torus_rotation(m, k) {
            rot.push(r.into_iter().map(|u| u + c * block).collect());
        }
    }
    for c in 1..copies {
        rot[(c - 1) * block].push(c * block);
        rot[c * block].push((c - 1) * block);
    }
    assert_eq!(genus_of(&g, face_count(g.n(), &rot)), copies);
}
