//! Accuracy, macro F-measure and G-mean from a confusion matrix where the
//! majority class hides a poorly recalled minority.

use drbench::metrics::{accuracy, class_f_measures, f_measure, g_mean, ConfusionMatrix};

fn main() -> drbench::Result<()> {
    // rows = truth, columns = prediction
    let cm = ConfusionMatrix::from_counts(&[vec![90, 5, 5], vec![4, 6, 0], vec![8, 0, 2]])?;
    for c in 0..cm.class_count() {
        println!(
            "class {c}: recall {:.3}  precision {:.3}",
            cm.recall(c),
            cm.precision(c)
        );
    }
    println!("per-class F {:.3?}", class_f_measures(&cm));
    println!("accuracy {:.4}", accuracy(&cm)?);
    println!("macro F  {:.4}", f_measure(&cm)?);
    println!("G-mean   {:.4}", g_mean(&cm)?);

    let blind = ConfusionMatrix::from_counts(&[vec![100, 0], vec![10, 0]])?;
    println!(
        "never predicting the minority: accuracy {:.4}, G-mean {:.4}",
        accuracy(&blind)?,
        g_mean(&blind)?
    );
    Ok(())
}
