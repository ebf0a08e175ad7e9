use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigenpairs of a real symmetric matrix sorted by ascending eigenvalue.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Column k is the eigenvector of `values[k]`.
    pub vectors: DMatrix<f64>,
}

impl Spectrum {
    pub fn of(matrix: DMatrix<f64>) -> Self {
        debug_assert!(max_asymmetry(&matrix) == 0.0);
        let eig = SymmetricEigen::new(matrix);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = DMatrix::from_columns(&order.iter().map(|&k| eig.eigenvectors.column(k)).collect::<Vec<_>>());
        Self { values, vectors }
    }

    /// Eigenvalues only, ascending.
    pub fn values_of(matrix: DMatrix<f64>) -> Vec<f64> {
        let mut values: Vec<f64> = matrix.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Index and squared overlap of the eigenvector closest to `reference`;
    /// ties go to the lower energy.
    pub fn best_match(&self, reference: &DVector<f64>) -> (usize, f64) {
        let mut best = (0, -1.0);
        for k in 0..self.values.len() {
            let overlap = self.vectors.column(k).dot(reference).powi(2);
            if overlap > best.1 {
                best = (k, overlap);
            }
        }
        best
    }
}

pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_pairs() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let s = Spectrum::of(m.clone());
        assert!((s.values[0] - 1.0).abs() < 1e-14 && (s.values[1] - 3.0).abs() < 1e-14);
        let v = s.vectors.column(1);
        assert!(((&m * v) - v * 3.0).amax() < 1e-14);
        assert_eq!(Spectrum::values_of(m).len(), 2);
    }

    #[test]
    fn ties_prefer_lower_energy() {
        let s = Spectrum::of(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        let r = DVector::from_vec(vec![1.0, 0.0]);
        assert_eq!(s.best_match(&r).0, 0);
    }
}
