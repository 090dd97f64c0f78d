use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::full_product;
use crate::endofunction::Endofunction;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantCheck {
    pub determinant: String,
    pub product: String,
    pub equal: bool,
}

/// Exact determinant by Gaussian elimination over the rationals.
#[allow(clippy::needless_range_loop)]
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// `V[i][j] = (1 - r^n)/(1 - r)` with `r = x_i (x_{f(j)} - x_j)²`.
#[allow(clippy::needless_range_loop)]
pub fn v_matrix(f: &Endofunction, point: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
    let n = f.n();
    if point.len() != n {
        return Err(Error::SizeMismatch(n, point.len()));
    }
    let c: Vec<BigRational> = (0..n)
        .map(|j| {
            let a = &point[f.apply(j)] - &point[j];
            &a * &a
        })
        .collect();
    let mut m = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let r = &point[i] * &c[j];
            let denom = BigRational::one() - &r;
            if denom.is_zero() {
                return Err(Error::SingularPoint { row: i, col: j });
            }
            let mut rn = BigRational::one();
            for _ in 0..n {
                rn *= &r;
            }
            row.push((BigRational::one() - rn) / denom);
        }
        m.push(row);
    }
    Ok(m)
}

/// Compares `det V(x)` with `Π_{i<j} (x_j - x_i)((x_{f(j)} - x_j)² - (x_{f(i)} - x_i)²)`
/// at an admissible rational point.
pub fn det_v_check(f: &Endofunction, point: &[BigRational]) -> Result<DeterminantCheck> {
    let det = determinant(v_matrix(f, point)?);
    let product = full_product(f).eval(point);
    Ok(DeterminantCheck { equal: det == product, determinant: det.to_string(), product: product.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    fn ef(s: &str) -> Endofunction {
        s.parse().unwrap()
    }

    fn q(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]]), rat(5));
        assert_eq!(determinant(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]), rat(-1));
        assert_eq!(determinant(vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]]), rat(0));
    }

    #[test]
    fn singular_point_rejected() {
        // x_1 (x_0 - x_1)² = 1 makes the (1, 1) entry's denominator vanish
        let point = [rat(0), rat(1), rat(3)];
        assert_eq!(det_v_check(&ef("0,0,1"), &point), Err(Error::SingularPoint { row: 1, col: 1 }));
    }

    #[test]
    fn identity_at_sample_points() {
        let f = ef("0,0,1");
        let check = det_v_check(&f, &[q(1, 2), q(-1, 3), q(2, 5)]).unwrap();
        assert!(check.equal, "{check:?}");
        let equal = vec![q(1, 7); 3];
        let check = det_v_check(&f, &equal).unwrap();
        assert!(check.equal && check.product == "0");
        let path = ef("0,0,1,2");
        let check = det_v_check(&path, &[q(1, 3), q(-2, 7), q(5, 11), q(3, 13)]).unwrap();
        assert!(check.equal);
    }
}
