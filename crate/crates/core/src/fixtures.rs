//! Named code families used as a golden corpus.
//!
//! Toric layout on an `L×L` torus: vertex `(i, j)` is `i·L + j`; the
//! horizontal edge `h(i, j)` joins `(i, j)`–`(i, j+1)` and is qubit `i·L + j`;
//! the vertical edge `v(i, j)` joins `(i, j)`–`(i+1, j)` and is qubit
//! `L² + i·L + j`. Face `(i, j)` has corners `(i, j)` and `(i+1, j+1)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::code::CssCode;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixtureError {
    #[error("toric size must be at least 2, got {0}")]
    TorusTooSmall(usize),
    #[error("face size must be even and at least 4, got {0}")]
    BadFaceSize(usize),
    #[error("torus of size {l} cannot hold a face with {n} sides")]
    FaceTooLarge { l: usize, n: usize },
    #[error("cube size must be at least 2, got {0}")]
    CubeTooSmall(usize),
}

fn toric_rows(l: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let h = |i: usize, j: usize| (i % l) * l + j % l;
    let v = |i: usize, j: usize| l * l + (i % l) * l + j % l;
    let mut x = Vec::with_capacity(l * l);
    let mut z = Vec::with_capacity(l * l);
    for i in 0..l {
        for j in 0..l {
            x.push(vec![h(i, j), h(i, j + l - 1), v(i, j), v(i + l - 1, j)]);
            z.push(vec![h(i, j), h(i + 1, j), v(i, j), v(i, j + 1)]);
        }
    }
    (x, z)
}

/// The toric code on an `L×L` torus: `N = 2L²`, `K = 2`, distance `L`.
pub fn try_toric(l: usize) -> Result<CssCode, FixtureError> {
    if l < 2 {
        return Err(FixtureError::TorusTooSmall(l));
    }
    let (x, z) = toric_rows(l);
    Ok(CssCode::from_rows(2 * l * l, x, z).expect("toric rows are valid"))
}

/// # Panics
/// If `l < 2`.
pub fn toric(l: usize) -> CssCode {
    try_toric(l).unwrap()
}

/// The `[[7, 1, 3]]` Steane code.
pub fn steane() -> CssCode {
    let rows = vec![vec![3, 4, 5, 6], vec![1, 2, 5, 6], vec![0, 2, 4, 6]];
    CssCode::from_rows(7, rows.clone(), rows).expect("Steane rows are valid")
}

/// A toric code in which an `a×b` patch of faces (`a = ⌊n/4⌋`, `b = n/2 − a`)
/// is merged into a single `n`-gon face. The merged face is row 0 of `hz`.
pub fn try_fig1(l: usize, n: usize) -> Result<CssCode, FixtureError> {
    if n < 4 || n % 2 == 1 {
        return Err(FixtureError::BadFaceSize(n));
    }
    let (a, b) = (n / 4, n / 2 - n / 4);
    if l < 2 || a >= l || b >= l {
        return Err(FixtureError::FaceTooLarge { l, n });
    }
    let (x, z) = toric_rows(l);
    let h = |i: usize, j: usize| i * l + j;
    let v = |i: usize, j: usize| l * l + i * l + j;
    let mut removed = vec![false; 2 * l * l];
    for i in 1..a {
        for j in 0..b {
            removed[h(i, j)] = true;
        }
    }
    for i in 0..a {
        for j in 1..b {
            removed[v(i, j)] = true;
        }
    }
    let mut index = vec![usize::MAX; 2 * l * l];
    let mut kept = 0;
    for (q, r) in removed.iter().enumerate() {
        if !r {
            index[q] = kept;
            kept += 1;
        }
    }
    let relabel = |row: &[usize]| -> Vec<usize> {
        let mut out: Vec<usize> = row.iter().filter(|&&q| !removed[q]).map(|&q| index[q]).collect();
        out.sort_unstable();
        out
    };
    let interior_vertex = |i: usize, j: usize| (1..a).contains(&i) && (1..b).contains(&j);
    let mut x_rows = Vec::new();
    for i in 0..l {
        for j in 0..l {
            if !interior_vertex(i, j) {
                x_rows.push(relabel(&x[i * l + j]));
            }
        }
    }
    let mut merged: BTreeMap<usize, bool> = BTreeMap::new();
    let mut z_rows = vec![Vec::new()];
    for i in 0..l {
        for j in 0..l {
            let face = &z[i * l + j];
            if i < a && j < b {
                for &q in face {
                    *merged.entry(q).or_default() ^= true;
                }
            } else {
                z_rows.push(relabel(face));
            }
        }
    }
    let boundary: Vec<usize> = merged.into_iter().filter(|&(_, odd)| odd).map(|(q, _)| q).collect();
    z_rows[0] = relabel(&boundary);
    Ok(CssCode::from_rows(kept, x_rows, z_rows).expect("merged rows are valid"))
}

/// # Panics
/// On sizes rejected by [`try_fig1`].
pub fn fig1(l: usize, n: usize) -> CssCode {
    try_fig1(l, n).unwrap()
}

/// The surface code on the boundary of the cube `[0, m]³` with two opposite-corner
/// plaquettes removed and replaced by their product, a single disconnected
/// Z-stabilizer. `K = 1` and the code is not reasonable.
pub fn try_punctured_sphere(m: usize) -> Result<CssCode, FixtureError> {
    if m < 2 {
        return Err(FixtureError::CubeTooSmall(m));
    }
    let on_surface = |p: [usize; 3]| p.iter().any(|&c| c == 0 || c == m);
    let mut vertices = BTreeMap::new();
    for x in 0..=m {
        for y in 0..=m {
            for z in 0..=m {
                if on_surface([x, y, z]) {
                    let id = vertices.len();
                    vertices.insert([x, y, z], id);
                }
            }
        }
    }
    let mut edges: BTreeMap<([usize; 3], usize), usize> = BTreeMap::new();
    let mut x_rows = vec![Vec::new(); vertices.len()];
    for (&p, &pv) in &vertices {
        for k in 0..3 {
            if p[k] == m || !(0..3).any(|o| o != k && (p[o] == 0 || p[o] == m)) {
                continue;
            }
            let mut q = p;
            q[k] += 1;
            let id = edges.len();
            edges.insert((p, k), id);
            x_rows[pv].push(id);
            x_rows[vertices[&q]].push(id);
        }
    }
    let mut faces = Vec::new();
    for &p in vertices.keys() {
        for (k1, k2, k3) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            if p[k1] == m || p[k2] == m || (p[k3] != 0 && p[k3] != m) {
                continue;
            }
            let (mut p1, mut p2) = (p, p);
            p1[k1] += 1;
            p2[k2] += 1;
            let mut face = vec![edges[&(p, k1)], edges[&(p, k2)], edges[&(p2, k1)], edges[&(p1, k2)]];
            face.sort_unstable();
            faces.push((p, k3, face));
        }
    }
    let first = faces.iter().position(|(p, k3, _)| *p == [0, 0, 0] && *k3 == 2).expect("corner face exists");
    let last = faces.iter().position(|(p, k3, _)| *p == [m - 1, m - 1, m] && *k3 == 2).expect("corner face exists");
    let mut product = faces[first].2.clone();
    product.extend_from_slice(&faces[last].2);
    product.sort_unstable();
    let mut z_rows: Vec<Vec<usize>> =
        faces.into_iter().enumerate().filter(|&(i, _)| i != first && i != last).map(|(_, f)| f.2).collect();
    z_rows.push(product);
    for r in &mut x_rows {
        r.sort_unstable();
    }
    Ok(CssCode::from_rows(edges.len(), x_rows, z_rows).expect("cube rows are valid"))
}

/// # Panics
/// If `m < 2`.
pub fn punctured_sphere(m: usize) -> CssCode {
    try_punctured_sphere(m).unwrap()
}

/// A toric code (`L ≥ 4`) whose first face row is replaced by the sum of two
/// faces that share no vertex: reasonable, but not connected.
#[cfg(test)]
pub(crate) fn merged_faces(l: usize, seed: u64) -> CssCode {
    use rand::Rng;
    assert!(l >= 4);
    let mut rng = crate::rng::rng(seed);
    let (x, mut z) = toric_rows(l);
    let dist = |a: usize, b: usize| {
        let d = a.abs_diff(b) % l;
        d.min(l - d)
    };
    let a = rng.gen_range(0..l * l);
    let b = loop {
        let b = rng.gen_range(0..l * l);
        let (di, dj) = (dist(a / l, b / l), dist(a % l, b % l));
        if di >= 2 || dj >= 2 {
            break b;
        }
    };
    let mut sum = z[a].clone();
    sum.extend_from_slice(&z[b]);
    sum.sort_unstable();
    z[a] = sum;
    CssCode::from_rows(2 * l * l, x, z).expect("toric rows are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toric_parameters() {
        for l in 2..=4 {
            let p = toric(l).validate().unwrap();
            assert_eq!((p.n, p.k, p.n_x, p.n_z, p.w_x, p.q_z), (2 * l * l, 2, l * l, l * l, 4, 2));
        }
        assert_eq!(try_toric(1), Err(FixtureError::TorusTooSmall(1)));
    }

    #[test]
    fn fig1_has_one_polygon_face() {
        for (l, n) in [(3, 6), (4, 8), (5, 10)] {
            let code = fig1(l, n);
            let p = code.validate().unwrap();
            assert_eq!(p.k, 2);
            assert_eq!(code.hz().row(0).len(), n);
            assert_eq!(p.w_z, n);
            assert!(code.is_reasonable().is_reasonable());
        }
        assert_eq!(fig1(3, 6).n(), 17);
        assert_eq!(try_fig1(3, 5), Err(FixtureError::BadFaceSize(5)));
        assert_eq!(try_fig1(2, 8), Err(FixtureError::FaceTooLarge { l: 2, n: 8 }));
    }

    #[test]
    fn punctured_sphere_has_one_logical() {
        for m in 2..=3 {
            let code = punctured_sphere(m);
            let p = code.validate().unwrap();
            assert_eq!(p.n, 12 * m * m);
            assert_eq!(p.k, 1);
            assert!(!code.is_reasonable().is_reasonable());
        }
    }

    #[test]
    fn merged_faces_is_reasonable_but_disconnected() {
        for seed in 0..5 {
            let code = merged_faces(4, seed);
            assert_eq!(code.validate().unwrap().k, 2);
            assert!(code.is_reasonable().is_reasonable());
            assert!(!code.is_connected());
        }
    }
}
