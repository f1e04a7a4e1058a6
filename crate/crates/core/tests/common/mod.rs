//! Independent reference computations for prime fields. Nothing here calls
//! into the library; the integration tests compare the two.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// `(m, n, q)` with `m < n`, both odd, coprime, at least 3, and
/// `q = 2mn + 1` prime and at most `qmax`.
pub fn admissible_prime_triples(qmax: u64) -> Vec<(usize, usize, u64)> {
    let mut out = Vec::new();
    for m in (3..).step_by(2).take_while(|m| 2 * m * (m + 2) < qmax) {
        for n in ((m + 2)..).step_by(2).take_while(|n| 2 * m * n < qmax) {
            let q = 2 * m * n + 1;
            if gcd(m, n) == 1 && is_prime(q) {
                out.push((m as usize, n as usize, q));
            }
        }
    }
    out.sort_by_key(|&(m, _, q)| (q, m));
    out
}

pub fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    acc
}

/// Smallest residue of exact multiplicative order `d` modulo the prime `q`.
pub fn smallest_of_order(d: u64, q: u64) -> u64 {
    (2..q)
        .find(|&x| pow_mod(x, d, q) == 1 && (1..d).all(|k| pow_mod(x, k, q) != 1))
        .expect("d divides q - 1")
}

/// `a[i][j] = eps^i * xi^j mod q`.
pub fn rank_one_rows(m: usize, n: usize, q: u64, xi: u64, eps: u64) -> Vec<Vec<u64>> {
    (0..m)
        .map(|i| (0..n).map(|j| pow_mod(eps, i as u64, q) * pow_mod(xi, j as u64, q) % q).collect())
        .collect()
}

/// `rho0` as a table on `0..q` (with `rho0[0] = 0`) for the natural row and
/// column orderings with every row read left to right.
pub fn rho0_table(rows: &[Vec<u64>], q: u64) -> Vec<u64> {
    let (m, n) = (rows.len(), rows[0].len());
    let mut table = vec![0; q as usize];
    for i in 0..m {
        for j in 0..n {
            let a = rows[i][j];
            let right = rows[i][(j + 1) % n];
            let below = rows[(i + 1) % m][j];
            // a in E: rho0(a) = -omega_r(a); -a in -E: rho0(-a) = omega_c(a)
            table[a as usize] = (q - right) % q;
            table[((q - a) % q) as usize] = below;
        }
    }
    table
}

pub fn invert(table: &[u64]) -> Vec<u64> {
    let mut inv = vec![0; table.len()];
    for (x, &y) in table.iter().enumerate() {
        inv[y as usize] = x as u64;
    }
    inv
}

/// The cycle of `rho0` through 1, as signed labels relative to the entries.
pub fn rho0_cycle_labels(rows: &[Vec<u64>], q: u64) -> Vec<i64> {
    let table = rho0_table(rows, q);
    let entries: HashSet<u64> = rows.iter().flatten().copied().collect();
    let mut out = Vec::new();
    let mut x = 1;
    loop {
        out.push(if entries.contains(&x) { x as i64 } else { -(((q - x) % q) as i64) });
        x = table[x as usize];
        if x == 1 {
            break;
        }
    }
    out
}

fn rotate(table: &[u64], q: u64, x: u64, y: u64) -> u64 {
    (x + table[((y + q - x) % q) as usize]) % q
}

/// Faces traced from every dart, each listed once starting at its least
/// vertex, keyed by length.
pub fn trace_faces(table: &[u64], q: u64) -> Vec<Vec<u64>> {
    let mut seen = HashSet::new();
    let mut faces = Vec::new();
    for x in 0..q {
        for y in 0..q {
            if x == y || seen.contains(&(x, y)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut u, mut v) = (x, y);
            while seen.insert((u, v)) {
                face.push(u);
                let w = rotate(table, q, v, u);
                u = v;
                v = w;
            }
            let start = (0..face.len()).min_by_key(|&i| face[i]).unwrap();
            face.rotate_left(start);
            faces.push(face);
        }
    }
    faces.sort();
    faces
}

pub fn census(faces: &[Vec<u64>]) -> BTreeMap<usize, usize> {
    let mut c = BTreeMap::new();
    for f in faces {
        *c.entry(f.len()).or_insert(0) += 1;
    }
    c
}

/// Brute-force count of map automorphisms of `K_q` with this rotation,
/// split into (orientation preserving, orientation reversing).
///
/// A candidate is fixed by the images `u, w` of `0, 1` and an orientation;
/// walking around vertex 0 then determines every other image.
pub fn count_automorphisms(table: &[u64], q: u64) -> (u64, u64) {
    let inv = invert(table);
    let mut counts = (0, 0);
    for u in 0..q {
        for w in 0..q {
            if u == w {
                continue;
            }
            for reversing in [false, true] {
                let target = if reversing { &inv } else { table };
                let mut sigma = vec![u64::MAX; q as usize];
                sigma[0] = u;
                let (mut y, mut sy) = (1, w);
                while sigma[y as usize] == u64::MAX {
                    sigma[y as usize] = sy;
                    y = rotate(table, q, 0, y);
                    sy = rotate(target, q, u, sy);
                }
                if sigma.contains(&u64::MAX) {
                    continue;
                }
                let image: HashSet<u64> = sigma.iter().copied().collect();
                if image.len() != q as usize {
                    continue;
                }
                let ok = (0..q).all(|x| {
                    (0..q).filter(|&y| y != x).all(|y| {
                        sigma[rotate(table, q, x, y) as usize]
                            == rotate(target, q, sigma[x as usize], sigma[y as usize])
                    })
                });
                if ok {
                    if reversing {
                        counts.1 += 1;
                    } else {
                        counts.0 += 1;
                    }
                }
            }
        }
    }
    counts
}
