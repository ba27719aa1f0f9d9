use super::Group;
use crate::metric::IntVector;

/// The free abelian group Z^rank with the standard basis as generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegerLattice {
    pub rank: usize,
}

impl IntegerLattice {
    pub fn new(rank: usize) -> Self {
        IntegerLattice { rank }
    }
}

impl Group for IntegerLattice {
    type Element = IntVector;

    fn name(&self) -> String {
        format!("Z^{}", self.rank)
    }

    fn identity(&self) -> IntVector {
        IntVector::zero(self.rank)
    }

    fn multiply(&self, a: &IntVector, b: &IntVector) -> IntVector {
        IntVector(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    fn invert(&self, a: &IntVector) -> IntVector {
        IntVector(a.0.iter().map(|x| -x).collect())
    }

    fn left_quotient(&self, a: &IntVector, b: &IntVector) -> IntVector {
        IntVector(a.0.iter().zip(&b.0).map(|(x, y)| y - x).collect())
    }

    fn base_generators(&self) -> Vec<IntVector> {
        (0..self.rank)
            .map(|i| {
                let mut v = vec![0; self.rank];
                v[i] = 1;
                IntVector(v)
            })
            .collect()
    }

    fn contains(&self, e: &IntVector) -> bool {
        e.rank() == self.rank
    }
}
