//! Linear soft-margin SVM trained by dual coordinate ascent: a binary fit
//! with its duality gap, then a one-vs-rest model over four classes.

use drbench::metrics::ScoreRow;
use drbench::svm::{svm_margin, svm_predict, svm_train_binary, OvrModelSet, SvmParams};
use drbench::{Matrix, RandomStream};

fn main() -> drbench::Result<()> {
    let mut rng = RandomStream::new(11);
    let centres = [[2.0, 2.0], [-2.0, 2.0], [-2.0, -2.0], [2.0, -2.0]];
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for (c, centre) in centres.iter().enumerate() {
        for _ in 0..50 {
            data.extend([centre[0] + rng.gaussian(), centre[1] + rng.gaussian()]);
            labels.push(c);
        }
    }
    let x = Matrix::from_vec(labels.len(), 2, data)?;
    let params = SvmParams {
        c: 1.0,
        seed: 5,
        ..SvmParams::default()
    };

    let y: Vec<f64> = labels.iter().map(|&c| if c == 0 { 1.0 } else { -1.0 }).collect();
    let m = svm_train_binary(&x, &y, &params)?;
    let (p, d) = (m.primal_history.last().unwrap(), m.dual_history.last().unwrap());
    println!(
        "class 0 vs rest: w = {:.3?}, b = {:.3}, {} epochs, converged {}",
        m.weights(),
        m.bias(),
        m.epochs(),
        m.converged
    );
    println!(
        "  primal {p:.4}  dual {d:.4}  gap {:.2e}  margin {:.3}",
        p - d,
        svm_margin(&m)?
    );

    let set = OvrModelSet::train(&x, &labels, 4, &params)?;
    let pred = x
        .row_iter()
        .map(|r| svm_predict(&set, r))
        .collect::<drbench::Result<Vec<_>>>()?;
    let s = ScoreRow::score(&labels, &pred, 4)?;
    println!(
        "one-vs-rest training accuracy {:.3}  F {:.3}  G-mean {:.3}",
        s.accuracy, s.f_measure, s.g_mean
    );
    Ok(())
}
