//! Lower bounds `‖Φ ⊗ id_n‖` by alternating maximization.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{operator_norm, polar_unitary, random_complex, CMat, ZERO};

use super::{split_blocks, BlockMap};

const SWEEPS: usize = 200;
const RESTARTS: usize = 4;

/// `(Φ⊗id_n)(X)` where each block of `X` is an `n×n` array of `d×d` blocks.
fn amplify(phi: &BlockMap, x: &[CMat], n: usize) -> Vec<CMat> {
    let mut out: Vec<CMat> = phi.codomain.iter().map(|&m| CMat::zeros(m * n, m * n)).collect();
    for r in 0..n {
        for s in 0..n {
            let slice: Vec<CMat> = phi
                .domain
                .iter()
                .zip(x)
                .map(|(&d, xb)| xb.view((r * d, s * d), (d, d)).into_owned())
                .collect();
            for (ob, (img, &m)) in out.iter_mut().zip(phi.apply(&slice).iter().zip(&phi.codomain)) {
                ob.view_mut((r * m, s * m), (m, m)).copy_from(img);
            }
        }
    }
    out
}

/// Predual of the amplification: `Tr(W x) = Tr(Z (Φ⊗id)(x))` for all `x`.
fn amplify_predual(phi: &BlockMap, z: &[CMat], n: usize) -> Vec<CMat> {
    let mut out: Vec<CMat> = phi.domain.iter().map(|&d| CMat::zeros(d * n, d * n)).collect();
    for r in 0..n {
        for s in 0..n {
            // Pairing Tr(Z_sr-block · Φ(x)) with x in the (r,s) slot.
            let zs: Vec<CMat> = phi
                .codomain
                .iter()
                .zip(z)
                .map(|(&m, zb)| zb.view((s * m, r * m), (m, m)).into_owned())
                .collect();
            let ztv = super::join_blocks(&zs.iter().map(|b| b.transpose()).collect::<Vec<_>>());
            let w = phi.action.transpose() * ztv;
            let w_blocks = split_blocks(&phi.domain, &w);
            for ((ob, wb), &d) in out.iter_mut().zip(&w_blocks).zip(&phi.domain) {
                ob.view_mut((s * d, r * d), (d, d)).copy_from(&wb.transpose());
            }
        }
    }
    out
}

fn best_block_norm(y: &[CMat]) -> (usize, f64) {
    y.iter()
        .enumerate()
        .map(|(k, b)| (k, operator_norm(b)))
        .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
}

fn climb(phi: &BlockMap, n: usize, mut x: Vec<CMat>) -> (f64, Vec<CMat>) {
    let mut best = best_block_norm(&amplify(phi, &x, n)).1;
    let mut best_x = x.clone();
    for _ in 0..SWEEPS {
        let y = amplify(phi, &x, n);
        let (k, _) = best_block_norm(&y);
        let svd = y[k].clone().svd(true, true);
        let idx = (0..svd.singular_values.len())
            .max_by(|a, b| svd.singular_values[*a].total_cmp(&svd.singular_values[*b]))
            .unwrap_or(0);
        let u = svd.u.as_ref().unwrap().column(idx).into_owned();
        let v = svd.v_t.as_ref().unwrap().row(idx).adjoint().into_owned();
        let z: Vec<CMat> = phi
            .codomain
            .iter()
            .enumerate()
            .map(|(j, &m)| if j == k { &v * u.adjoint() } else { CMat::zeros(m * n, m * n) })
            .collect();
        let w = amplify_predual(phi, &z, n);
        x = w.iter().map(|b| if b.iter().all(|e| *e == ZERO) { b.clone() } else { polar_unitary(b).adjoint() }).collect();
        let value = best_block_norm(&amplify(phi, &x, n)).1;
        if value > best + 1e-13 {
            best = value;
            best_x = x.clone();
        } else {
            break;
        }
    }
    (best, best_x)
}

/// `‖Φ⊗id_n‖` estimated from below, for a single amplification level.
pub fn amplified_norm(phi: &BlockMap, n: usize, seed: u64, warm: Option<&[CMat]>) -> (f64, Vec<CMat>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (-1.0, Vec::new());
    if let Some(start) = warm {
        best = climb(phi, n, start.to_vec());
    }
    for _ in 0..RESTARTS {
        let start: Vec<CMat> = phi
            .domain
            .iter()
            .map(|&d| polar_unitary(&random_complex(&mut rng, d * n, d * n)))
            .collect();
        let candidate = climb(phi, n, start);
        if candidate.0 > best.0 {
            best = candidate;
        }
    }
    best
}

/// Lower bound for `‖Φ‖_cb` from amplifications up to `n`; monotone in `n` by warm starts.
pub fn cb_norm_lower(phi: &BlockMap, n: usize, seed: u64) -> f64 {
    let mut value: f64 = 0.0;
    let mut previous: Option<Vec<CMat>> = None;
    for k in 1..=n.max(1) {
        let warm = previous.as_ref().map(|x| pad(phi, x, k - 1, k));
        let (v, x) = amplified_norm(phi, k, seed, warm.as_deref());
        value = value.max(v);
        previous = Some(x);
    }
    value
}

/// Embeds `X ∈ A⊗M_from` into `A⊗M_to` in the top-left corner.
fn pad(phi: &BlockMap, x: &[CMat], from: usize, to: usize) -> Vec<CMat> {
    phi.domain
        .iter()
        .zip(x)
        .map(|(&d, xb)| {
            let mut out = CMat::zeros(d * to, d * to);
            out.view_mut((0, 0), (d * from, d * from)).copy_from(xb);
            out
        })
        .collect()
}
