//! Time-share weights of the two multi-connectivity strategies.
//!
//! For closest-LOS switching the share of AP `i` is the probability that it
//! is the closest LOS AP. Reactive switching is modelled as an absorbing
//! Markov chain over the associated APs whose absorbing state is outage.

use crate::blockage::{los_probability, mean_los_duration, mean_nlos_duration, SystemParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Probability that at least one link is LOS, `1 - prod(1 - p_i)`.
pub fn any_los_probability<T: Scalar>(p: &[T]) -> T {
    T::one() - p.iter().fold(T::one(), |acc, &pi| acc * (T::one() - pi))
}

/// `p_i * prod_{j<i} (1 - p_j)` for each `i`.
fn first_los_masses<T: Scalar>(p: &[T]) -> Vec<T> {
    let mut blocked_before = T::one();
    p.iter()
        .map(|&pi| {
            let m = pi * blocked_before;
            blocked_before = blocked_before * (T::one() - pi);
            m
        })
        .collect()
}

/// Closest-LOS shares from per-link LOS probabilities.
pub fn closest_shares_from_probabilities<T: Scalar>(p: &[T]) -> Vec<T> {
    let masses = first_los_masses(p);
    let total = masses.iter().fold(T::zero(), |a, &m| a + m);
    if total <= T::zero() {
        let mut e = vec![T::zero(); p.len()];
        e[0] = T::one();
        return e;
    }
    masses.into_iter().map(|m| m / total).collect()
}

/// Share of the non-outage time spent on each AP under closest-LOS
/// switching.
pub fn closest_shares<T: Scalar>(xs: &[T], params: &SystemParams<T>) -> Vec<T> {
    let p: Vec<T> = xs.iter().map(|&x| los_probability(x, params)).collect();
    closest_shares_from_probabilities(&p)
}

/// Absorbing Markov chain of reactive switching.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchChain<T = f64> {
    n: usize,
    /// Row-major `n x n` transition probabilities between transient states.
    u: Vec<T>,
    /// Initial distribution after leaving outage.
    b: Vec<T>,
    /// Row-major fundamental matrix `(I - U)^-1`.
    d: Vec<T>,
}

impl<T: Scalar> SwitchChain<T> {
    /// Assembles a chain from its transition matrix (row-major) and initial
    /// distribution.
    pub fn from_parts(u: Vec<T>, b: Vec<T>) -> Result<Self> {
        let n = b.len();
        if n == 0 || u.len() != n * n {
            return Err(Error::InvalidParameter {
                name: "chain",
                reason: format!("U must be {n}x{n}"),
            });
        }
        let mut a = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let eye = if i == j { T::one() } else { T::zero() };
                a[i * n + j] = eye - u[i * n + j];
            }
        }
        let d = invert(&a, n)?;
        Ok(Self { n, u, b, d })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn u(&self, i: usize, j: usize) -> T {
        self.u[i * self.n + j]
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> T {
        self.d[i * self.n + j]
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    /// Per-step absorption (outage) probability out of state `i`.
    pub fn absorption(&self, i: usize) -> T {
        T::one() - (0..self.n).fold(T::zero(), |a, j| a + self.u(i, j))
    }
}

/// Gauss-Jordan inverse with partial pivoting.
fn invert<T: Scalar>(a: &[T], n: usize) -> Result<Vec<T>> {
    let mut m = a.to_vec();
    let mut inv = vec![T::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = T::one();
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| m[r * n + col].abs().partial_cmp(&m[s * n + col].abs()).unwrap())
            .unwrap();
        let pv = m[pivot * n + col];
        if !(pv.abs() > T::epsilon()) {
            return Err(Error::SingularMatrix);
        }
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        for k in 0..n {
            m[col * n + k] = m[col * n + k] / pv;
            inv[col * n + k] = inv[col * n + k] / pv;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = m[r * n + col];
            if factor == T::zero() {
                continue;
            }
            for k in 0..n {
                m[r * n + k] = m[r * n + k] - factor * m[col * n + k];
                inv[r * n + k] = inv[r * n + k] - factor * inv[col * n + k];
            }
        }
    }
    Ok(inv)
}

/// Chain for APs at the given ordered distances:
/// `u_ij = p_j prod_{k<j}(1 - p_k)` off the diagonal, zero on it, and
/// `b_i` proportional to the mean blocked duration of link `i`.
pub fn build_switch_chain<T: Scalar>(xs: &[T], params: &SystemParams<T>) -> Result<SwitchChain<T>> {
    if xs.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "degree",
            reason: "reactive switching needs at least two APs".into(),
        });
    }
    if params.lambda_b <= T::zero() {
        return Err(Error::NeverBlocked);
    }
    let n = xs.len();
    let p: Vec<T> = xs.iter().map(|&x| los_probability(x, params)).collect();
    let masses = first_los_masses(&p);
    let mut u = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                u[i * n + j] = masses[j];
            }
        }
    }
    let nlos: Vec<T> = xs
        .iter()
        .map(|&x| mean_nlos_duration(x, params))
        .collect::<Result<_>>()?;
    let total = nlos.iter().fold(T::zero(), |a, &t| a + t);
    let b = nlos.into_iter().map(|t| t / total).collect();
    SwitchChain::from_parts(u, b)
}

/// Reactive-switching shares from the chain's expected visit counts
/// weighted by mean LOS durations.
pub fn reactive_shares_from_chain<T: Scalar>(chain: &SwitchChain<T>, xs: &[T], params: &SystemParams<T>) -> Vec<T> {
    let n = chain.degree();
    let t_los: Vec<T> = xs
        .iter()
        .map(|&x| mean_los_duration(x, params).mean().unwrap_or_else(T::one))
        .collect();
    let mut gamma = vec![T::zero(); n];
    for j in 0..n {
        let norm = (0..n).fold(T::zero(), |a, k| a + chain.d(j, k) * t_los[k]);
        for (i, g) in gamma.iter_mut().enumerate() {
            *g = *g + chain.b[j] * chain.d(j, i) * t_los[i] / norm;
        }
    }
    gamma
}

/// Reactive shares for any degree and blocker density: a single AP or a
/// blocker-free room keeps the UE on the closest AP.
pub fn reactive_shares<T: Scalar>(xs: &[T], params: &SystemParams<T>) -> Vec<T> {
    if xs.len() < 2 || params.lambda_b <= T::zero() {
        let mut e = vec![T::zero(); xs.len()];
        e[0] = T::one();
        return e;
    }
    let chain = build_switch_chain(xs, params).expect("p_L < 1 keeps I - U invertible");
    reactive_shares_from_chain(&chain, xs, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn single_ap_gets_everything() {
        assert_eq!(closest_shares(&[4.0], &p()), vec![1.0]);
        assert_eq!(reactive_shares(&[4.0], &p()), vec![1.0]);
    }

    #[test]
    fn equal_half_probabilities() {
        let g = closest_shares_from_probabilities(&[0.5f64, 0.5]);
        assert!((g[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((g[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cmc_shares_sum_to_one() {
        let g = closest_shares(&[1.5, 2.0, 9.0, 30.0], &p());
        let s: f64 = g.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
        assert!(g.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn two_ap_chain_against_hand_inverse() {
        // p1 = 0.8, p2 = 0.5: u12 = 0.5 * 0.2 = 0.1, u21 = 0.8
        let u: Vec<f64> = vec![0.0, 0.1, 0.8, 0.0];
        let chain = SwitchChain::from_parts(u, vec![0.5, 0.5]).unwrap();
        // inverse of [[1, -0.1], [-0.8, 1]] = [[1, 0.1], [0.8, 1]] / 0.92
        let det = 1.0 - 0.1 * 0.8;
        let expect = [1.0 / det, 0.1 / det, 0.8 / det, 1.0 / det];
        for i in 0..2 {
            for j in 0..2 {
                assert!((chain.d(i, j) - expect[i * 2 + j]).abs() < 1e-15);
            }
        }
        assert!((chain.absorption(0) - 0.9).abs() < 1e-15);
        assert!((chain.absorption(1) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn fully_blocked_links_give_identity() {
        let chain = SwitchChain::from_parts(vec![0.0; 9], vec![0.2, 0.3, 0.5]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(chain.d(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn singular_system_reported() {
        let u = vec![0.0, 1.0, 1.0, 0.0];
        assert!(matches!(
            SwitchChain::from_parts(u, vec![0.5, 0.5]),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn chain_built_from_distances() {
        let params = p();
        let xs = [3.0, 6.0];
        let chain = build_switch_chain(&xs, &params).unwrap();
        let p1 = los_probability(3.0, &params);
        let p2 = los_probability(6.0, &params);
        assert_eq!(chain.u(0, 0), 0.0);
        assert!((chain.u(0, 1) - p2 * (1.0 - p1)).abs() < 1e-15);
        assert!((chain.u(1, 0) - p1).abs() < 1e-15);
        let t1 = mean_nlos_duration(3.0, &params).unwrap();
        let t2 = mean_nlos_duration(6.0, &params).unwrap();
        assert!((chain.b()[0] - t1 / (t1 + t2)).abs() < 1e-15);
    }

    #[test]
    fn rmc_two_ap_hand_evaluation() {
        let params = p();
        let (x1, x2) = (3.0, 6.0);
        let chain = build_switch_chain(&[x1, x2], &params).unwrap();
        let g = reactive_shares_from_chain(&chain, &[x1, x2], &params);
        // scalar evaluation with the 2x2 closed-form inverse
        let p1 = los_probability(x1, &params);
        let p2 = los_probability(x2, &params);
        let (u12, u21) = (p2 * (1.0 - p1), p1);
        let det = 1.0 - u12 * u21;
        let d = [[1.0 / det, u12 / det], [u21 / det, 1.0 / det]];
        let n1 = mean_nlos_duration(x1, &params).unwrap();
        let n2 = mean_nlos_duration(x2, &params).unwrap();
        let b = [n1 / (n1 + n2), n2 / (n1 + n2)];
        let t = [
            1.0 / (2.0 * 0.3 * 0.2 * (0.5 / 1.8 * x1 + 0.3)),
            1.0 / (2.0 * 0.3 * 0.2 * (0.5 / 1.8 * x2 + 0.3)),
        ];
        for i in 0..2 {
            let expect: f64 = (0..2)
                .map(|j| b[j] * d[j][i] * t[i] / (d[j][0] * t[0] + d[j][1] * t[1]))
                .sum();
            assert!((g[i] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn blocker_free_room_stays_on_closest() {
        let params = p().with_lambda_b(0.0);
        assert_eq!(reactive_shares(&[2.0, 3.0, 4.0], &params), vec![1.0, 0.0, 0.0]);
        assert!(matches!(
            build_switch_chain(&[2.0, 3.0], &params),
            Err(Error::NeverBlocked)
        ));
    }

    #[test]
    fn single_precision_chain() {
        let params: SystemParams<f32> = SystemParams::default();
        let g = reactive_shares(&[2.0f32, 5.0, 9.0], &params);
        let s: f32 = g.iter().sum();
        assert!((s - 1.0).abs() < 1e-5);
    }
}
