//! KNN vs ENN on an imbalanced two-class problem: a dense majority class and
//! a small minority cluster sitting on its edge.

use drbench::metrics::ScoreRow;
use drbench::neighbors::NeighborModel;
use drbench::{Matrix, RandomStream};

fn main() -> drbench::Result<()> {
    let mut rng = RandomStream::new(3);
    let mut sample =
        |n: usize, centre: [f64; 2], spread: f64, label: usize, x: &mut Vec<f64>, y: &mut Vec<usize>| {
            for _ in 0..n {
                x.extend([
                    centre[0] + spread * rng.gaussian(),
                    centre[1] + spread * rng.gaussian(),
                ]);
                y.push(label);
            }
        };

    let (mut tx, mut ty) = (Vec::new(), Vec::new());
    sample(150, [0.0, 0.0], 1.5, 0, &mut tx, &mut ty);
    sample(15, [2.5, 0.0], 0.6, 1, &mut tx, &mut ty);
    let train = Matrix::from_vec(ty.len(), 2, tx)?;

    let (mut qx, mut qy) = (Vec::new(), Vec::new());
    sample(150, [0.0, 0.0], 1.5, 0, &mut qx, &mut qy);
    sample(15, [2.5, 0.0], 0.6, 1, &mut qx, &mut qy);
    let test = Matrix::from_vec(qy.len(), 2, qx)?;

    let model = NeighborModel::fit(train, ty, 5, 2)?;
    println!(
        "ENN class statistics on the training set: {:.3?}",
        model.enn_base_stats()
    );

    let knn = test
        .row_iter()
        .map(|q| model.knn_predict(q).map(|p| p.label))
        .collect::<drbench::Result<Vec<_>>>()?;
    let enn = test
        .row_iter()
        .map(|q| model.enn_predict(q))
        .collect::<drbench::Result<Vec<_>>>()?;
    for (name, pred) in [("KNN", &knn), ("ENN", &enn)] {
        let s = ScoreRow::score(&qy, pred, 2)?;
        println!(
            "{name}: accuracy {:.3}  F {:.3}  G-mean {:.3}",
            s.accuracy, s.f_measure, s.g_mean
        );
    }

    let q = [1.6, 0.2];
    println!(
        "query {q:?}: KNN {:?}, ENN scores {:.4?}",
        model.knn_predict(&q)?,
        model.enn_scores(&q)?
    );
    Ok(())
}
