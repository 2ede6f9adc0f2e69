//! Classical MDS: recovers a planar configuration (up to rotation) from its
//! distance matrix, then shows eigenvalue clamping on a non-Euclidean one.

use drbench::mds::classical_mds;
use drbench::numerics::pairwise_dists;
use drbench::Matrix;

fn main() -> drbench::Result<()> {
    let cities = Matrix::from_rows(&[[0.0, 0.0], [3.0, 0.0], [3.0, 4.0], [0.0, 4.0], [1.5, 2.0]])?;
    let d = pairwise_dists(&cities)?;
    let fit = classical_mds(&d, 2)?;
    println!("eigenvalues {:.4?}  strain {:.2e}", fit.eigenvalues, fit.strain);
    let back = pairwise_dists(&fit.x)?;
    println!("max distance error {:.2e}", back.max_abs_diff(&d));

    // violates the triangle inequality, so B has a negative eigenvalue
    let bent = Matrix::from_rows(&[[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])?;
    let fit = classical_mds(&bent, 2)?;
    println!(
        "non-euclidean: eigenvalues {:.4?}, {} clamped, positive rank {}",
        fit.eigenvalues, fit.clamped_count, fit.positive_rank
    );
    Ok(())
}
