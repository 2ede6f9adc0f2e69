//! Eigendecomposition of a small symmetric matrix with cyclic Jacobi rotations.

use drbench::numerics::jacobi_eigh;
use drbench::Matrix;

fn main() -> drbench::Result<()> {
    let s = Matrix::from_rows(&[
        [4.0, 1.0, -2.0, 2.0],
        [1.0, 2.0, 0.0, 1.0],
        [-2.0, 0.0, 3.0, -2.0],
        [2.0, 1.0, -2.0, -1.0],
    ])?;
    let eig = jacobi_eigh(&s)?;
    println!("converged after {} sweeps", eig.sweeps);
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvector(j);
        // residual ‖S v − λ v‖
        let sv = s.matmul(&Matrix::from_vec(4, 1, v.clone())?)?;
        let r: f64 = sv
            .as_slice()
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        println!("λ{j} = {lambda:>9.5}  v = {v:>8.4?}  residual {r:.1e}");
    }
    println!(
        "trace {:.5} = Σλ {:.5}",
        s.trace(),
        eig.eigenvalues.iter().sum::<f64>()
    );
    Ok(())
}
