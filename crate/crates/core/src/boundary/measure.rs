use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::pow;

use crate::ck::cylinder::vertex_measure;
use crate::covering::{busemann, Ray, SpanningData, TreeVertex, Word};
use crate::error::Result;
use crate::graph::Graph;

/// The measure on the boundary of the `(q+1)`-regular covering tree with
/// `mu(Omega_v) = q^(1 - d(O, v))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryMeasure {
    pub q: u32,
}

impl BoundaryMeasure {
    pub fn new(g: &Graph) -> Result<BoundaryMeasure> {
        Ok(BoundaryMeasure { q: g.branching()? })
    }

    pub fn cylinder(&self, v: &TreeVertex) -> BigRational {
        vertex_measure(&BigInt::from(self.q), v.depth())
    }

    pub fn total(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.q + 1))
    }

    /// Same value scaled to a probability measure.
    pub fn normalized(&self, v: &TreeVertex) -> BigRational {
        self.cylinder(v) / self.total()
    }

    /// `q^n` for any integer `n`.
    pub fn power(&self, n: i64) -> BigRational {
        let q = BigInt::from(self.q);
        let p = pow(q, n.unsigned_abs() as usize);
        if n >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::from(1), p)
        }
    }
}

pub fn cylinder_measure(g: &Graph, v: &TreeVertex) -> Result<BigRational> {
    Ok(BoundaryMeasure::new(g)?.cylinder(v))
}

/// `q^delta(g, omega)`.
pub fn radon_nikodym(sd: &SpanningData, w: &Word, ray: &Ray) -> Result<BigRational> {
    let m = BoundaryMeasure::new(sd.graph())?;
    Ok(m.power(busemann(sd, w, ray)))
}
