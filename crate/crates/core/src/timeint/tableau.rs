use crate::error::{Error, Result};

/// Implicit Runge-Kutta coefficients `(A, b, c)` with `s` stages.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    pub s: usize,
    /// Row-major `s × s`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub order: usize,
}

impl ButcherTableau {
    fn from_rows(rows: &[&[f64]], order: usize) -> Self {
        let s = rows.len();
        let a: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        let b = rows[s - 1].to_vec();
        let c = rows.iter().map(|r| r.iter().sum()).collect();
        Self { s, a, b, c, order }
    }

    #[inline]
    pub fn a(&self, j: usize, k: usize) -> f64 {
        self.a[j * self.s + k]
    }

    /// One-stage backward Euler, `A = [1]`. Used by the first-order IMEX step,
    /// where the transport term is explicit and only the relaxation is implicit.
    pub fn implicit_euler() -> Self {
        Self::from_rows(&[&[1.0]], 1)
    }
}

/// Lobatto IIIC tableau of order 2, 4 or 6.
///
/// All three share the structure that makes them usable with a singular
/// diffusion matrix: the first row of `A` is non-null and `b` is the last row.
///
/// ```
/// use kinetic1d::timeint::lobatto_iiic;
/// let t = lobatto_iiic(2).unwrap();
/// assert_eq!(t.a, vec![0.5, -0.5, 0.5, 0.5]);
/// assert_eq!(t.c, vec![0.0, 1.0]);
/// ```
pub fn lobatto_iiic(order: usize) -> Result<ButcherTableau> {
    match order {
        2 => Ok(ButcherTableau::from_rows(&[&[0.5, -0.5], &[0.5, 0.5]], 2)),
        4 => Ok(ButcherTableau::from_rows(
            &[
                &[1.0 / 6.0, -1.0 / 3.0, 1.0 / 6.0],
                &[1.0 / 6.0, 5.0 / 12.0, -1.0 / 12.0],
                &[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            ],
            4,
        )),
        6 => {
            let r5 = 5f64.sqrt();
            Ok(ButcherTableau::from_rows(
                &[
                    &[1.0 / 12.0, -r5 / 12.0, r5 / 12.0, -1.0 / 12.0],
                    &[1.0 / 12.0, 0.25, (10.0 - 7.0 * r5) / 60.0, r5 / 60.0],
                    &[1.0 / 12.0, (10.0 + 7.0 * r5) / 60.0, 0.25, -r5 / 60.0],
                    &[1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0],
                ],
                6,
            ))
        }
        _ => Err(Error::Unsupported(format!("no Lobatto IIIC tableau of order {order}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Lu;

    #[test]
    fn structural_identities() {
        for q in [2, 4, 6] {
            let t = lobatto_iiic(q).unwrap();
            assert_eq!(t.b, t.a[(t.s - 1) * t.s..].to_vec());
            assert!(t.c[0].abs() < 1e-15 && (t.c[t.s - 1] - 1.0).abs() < 1e-15);
            assert!(Lu::factor(t.s, &t.a).is_some());
            assert!((t.b.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        assert!(lobatto_iiic(3).is_err());
    }

    #[test]
    fn order_four_rows_and_nodes() {
        let t = lobatto_iiic(4).unwrap();
        assert_eq!(&t.a[6..], &[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]);
        assert!((t.c[1] - 0.5).abs() < 1e-15);
        let t6 = lobatto_iiic(6).unwrap();
        let r5 = 5f64.sqrt();
        assert!((t6.c[1] - (5.0 - r5) / 10.0).abs() < 1e-15);
        assert!((t6.c[2] - (5.0 + r5) / 10.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_order_conditions() {
        // b·c^(k-1) = 1/k up to the quadrature order 2s − 2
        for q in [2, 4, 6] {
            let t = lobatto_iiic(q).unwrap();
            for k in 1..=(2 * t.s - 2) {
                let v: f64 = (0..t.s).map(|i| t.b[i] * t.c[i].powi(k as i32 - 1)).sum();
                assert!((v - 1.0 / k as f64).abs() < 1e-14, "order {q}, k = {k}");
            }
        }
    }
}
