//! KNN and one-vs-rest linear SVM on two seeded Gaussian clouds: held-out
//! accuracy, confusion matrices and a model file round trip.

use emofuse::classify::{
    decode_model, encode_model, evaluate, knn_train, svm_train, Classifier, Model, SvmParams,
};
use emofuse::dataset::stratified_split;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;

/// Approximately normal draw: sum of 12 uniforms minus 6.
fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    (0..12).map(|_| rng.gen::<f64>()).sum::<f64>() - 6.0
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for i in 0..200 {
        let (label, centre) = if i % 2 == 0 { ("calm", 0.0) } else { ("tense", 4.0) };
        vectors.push((0..5).map(|_| centre + gauss(&mut rng)).collect::<Vec<f64>>());
        labels.push(label.to_string());
    }
    let (train, test) = stratified_split(&labels, 0.75, 42)?;
    let pick = |idx: &[usize]| -> (Vec<Vec<f64>>, Vec<String>) {
        (idx.iter().map(|&i| vectors[i].clone()).collect(), idx.iter().map(|&i| labels[i].clone()).collect())
    };
    let (train_x, train_y) = pick(&train);
    let (test_x, test_y) = pick(&test);

    let models: Vec<Model> = vec![
        knn_train(&train_x, &train_y, 3)?.into(),
        svm_train(&train_x, &train_y, SvmParams::default())?.into(),
    ];
    for model in &models {
        let (acc, confusion) = evaluate(model, &test_x, &test_y)?;
        println!("{}: held-out accuracy {:.1}%", model.kind(), 100.0 * acc);
        println!("{confusion}");

        let bytes = encode_model(model);
        let back = decode_model(&bytes)?;
        assert_eq!(back.predict(&test_x[0])?, model.predict(&test_x[0])?);
        println!("model file: {} bytes, decodes to the same predictions\n", bytes.len());
    }
    Ok(())
}
