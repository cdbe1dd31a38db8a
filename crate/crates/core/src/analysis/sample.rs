use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::patterns::Problem;

/// `floor(fraction * n)`, tolerant of binary rounding just below an integer.
pub fn sample_size(n: usize, fraction: f64) -> usize {
    let f = fraction.clamp(0.0, 1.0);
    ((f * n as f64) + 1e-9).floor().min(n as f64) as usize
}

/// Uniform sample without replacement, returned in corpus order.
pub fn sample_uniform(problems: &[Problem], fraction: f64, seed: u64) -> Vec<Problem> {
    let k = sample_size(problems.len(), fraction);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, problems.len(), k).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| problems[i].clone()).collect()
}

/// Judgment entry sheet with empty `correct`, `precise` and `notes` columns.
pub fn judgment_template(sample: &[Problem]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "problem_id",
        "category",
        "truth_test",
        "falsity_test",
        "correct",
        "precise",
        "notes",
    ])?;
    for p in sample {
        let (t, f) = (p.truth_test.to_kif(), p.falsity_test.to_kif());
        w.write_record([p.id.as_str(), p.category.label(), &t, &f, "", "", ""])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(sample_size(7505, 0.01), 75);
        assert_eq!(sample_size(100, 0.29), 29);
        assert_eq!(sample_size(10, 0.0), 0);
        assert_eq!(sample_size(10, 1.0), 10);
        assert_eq!(sample_size(0, 0.5), 0);
    }
}
