//! Parameter classification: follow the merged singular orbit of
//! lambda * i and decide whether the origin is the only attractor, an
//! extra attracting cycle exists, the orbit escapes, or the budget runs
//! out. The origin is superattracting for every lambda, so one orbit
//! settles the whole dichotomy.
//!
//! Run with: cargo run --example classify_parameters

use num_complex::Complex64;
use tanz2::map::Parameter;
use tanz2::orbit::{classify_parameter, Verdict};

fn main() {
    let samples = [
        ("0.85", Complex64::new(0.85, 0.0)),
        ("1.05", Complex64::new(1.05, 0.0)),
        ("0.02+1.38i", Complex64::new(0.02, 1.38)),
        ("0.02+1.56i", Complex64::new(0.02, 1.56)),
        ("0.5i", Complex64::new(0.0, 0.5)),
        ("2+2i", Complex64::new(2.0, 2.0)),
        ("3.2", Complex64::new(3.2, 0.0)),
    ];

    println!("{:<12} {:<22} {:<10} {}", "lambda", "verdict", "period", "multiplier modulus");
    for (label, lambda) in samples {
        let p = Parameter::new(lambda).expect("nonzero lambda");
        let class = classify_parameter(p, 2000);
        let (verdict, period, modulus) = match (class.verdict, &class.cycle) {
            (Verdict::AttractingCycle(k), Some(cycle)) => (
                String::from("attracting cycle"),
                k.to_string(),
                format!("{:.6}", cycle.multiplier.norm()),
            ),
            (Verdict::OriginOnly, _) => (
                String::from("origin only"),
                String::from("-"),
                String::from("-"),
            ),
            (Verdict::SingularEscape, _) => (
                String::from("singular escape"),
                String::from("-"),
                String::from("-"),
            ),
            (verdict, _) => (format!("{verdict:?}"), String::from("-"), String::from("-")),
        };
        println!("{label:<12} {verdict:<22} {period:<10} {modulus}");
    }
    println!();

    // The verdict respects the family's symmetries: lambda -> -lambda and
    // lambda -> conj(lambda) preserve both verdict and period.
    let lambda = Complex64::new(0.02, 1.38);
    let base = classify_parameter(Parameter::new(lambda).unwrap(), 2000).verdict;
    let neg = classify_parameter(Parameter::new(-lambda).unwrap(), 2000).verdict;
    let conj = classify_parameter(Parameter::new(lambda.conj()).unwrap(), 2000).verdict;
    println!("verdict at  {lambda}: {base:?}");
    println!("verdict at {}: {neg:?}", -lambda);
    println!("verdict at  {}: {conj:?}", lambda.conj());
    assert_eq!(base, neg);
    assert_eq!(base, conj);
}
