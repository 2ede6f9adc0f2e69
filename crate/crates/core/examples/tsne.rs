//! Embeds three gaussian clusters from 10-D into 2-D with exact t-SNE and
//! prints the cost trace plus per-cluster centroids of the layout.

use drbench::tsne::{tsne_embed, TsneParams};
use drbench::{Matrix, RandomStream};

fn main() -> drbench::Result<()> {
    let (x, labels) = clusters(3, 40, 10, 8.0, 1);
    let params = TsneParams {
        perplexity: 20.0,
        iterations: 600,
        seed: 7,
        ..TsneParams::default()
    };
    let emb = tsne_embed(&x, &params)?;

    for (it, cost) in emb.cost_history.iter().enumerate().step_by(100) {
        println!("iter {it:>4}  KL {cost:.4}");
    }
    println!("final KL {:.4}", emb.final_cost);

    for c in 0..3 {
        let rows: Vec<&[f64]> = (0..x.rows())
            .filter(|&i| labels[i] == c)
            .map(|i| emb.y.row(i))
            .collect();
        let mean = |d: usize| rows.iter().map(|r| r[d]).sum::<f64>() / rows.len() as f64;
        println!("cluster {c}: centroid ({:>7.2}, {:>7.2})", mean(0), mean(1));
    }
    Ok(())
}

fn clusters(k: usize, per: usize, dim: usize, sep: f64, seed: u64) -> (Matrix, Vec<usize>) {
    let mut rng = RandomStream::new(seed);
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for c in 0..k {
        for _ in 0..per {
            data.extend((0..dim).map(|d| if d == c { sep } else { 0.0 } + rng.gaussian()));
            labels.push(c);
        }
    }
    (Matrix::from_vec(k * per, dim, data).unwrap(), labels)
}
