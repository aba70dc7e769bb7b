//! Forward iteration basics: evaluate f(z) = lambda * tan(z^2), follow
//! orbits to their fate, and check the family's symmetry identities on
//! concrete points.
//!
//! Run with: cargo run --example forward_orbits

use num_complex::Complex64;
use tanz2::map::{derivative, eval, eval_detailed, iterate, EvalOutcome, OrbitFate, Parameter};

fn main() {
    let p = Parameter::new(Complex64::new(0.85, 0.0)).expect("nonzero lambda");

    println!("family: f(z) = lambda * tan(z^2), lambda = {}", p.lambda());
    println!("asymptotic values: {:?}", p.asymptotic_values());
    println!();

    // Single evaluations. eval_detailed distinguishes poles and overflow
    // from finite values instead of returning NaN.
    for z in [
        Complex64::new(0.5, 0.3),
        Complex64::new(1.2533141373155003, 0.0), // sqrt(pi/2): z^2 on a pole of tan
        Complex64::new(20.0, 0.0),
    ] {
        match eval_detailed(p, z) {
            EvalOutcome::Finite(w) => println!("f({z}) = {w}"),
            EvalOutcome::Pole => println!("f({z}) = infinity (pole of tan)"),
            EvalOutcome::Overflow => println!("f({z}) overflows double range"),
        }
    }
    println!();

    // Orbits and their fates. At lambda = 0.85 the origin attracts both
    // asymptotic values, so generic small seeds converge to 0.
    for z0 in [
        Complex64::new(0.4, 0.1),
        Complex64::new(0.0, 0.85),
        Complex64::new(1.2533141373155003, 0.0),
    ] {
        let orbit = iterate(p, z0, 200, 1e-10);
        let fate = match orbit.fate {
            OrbitFate::ConvergedToPoint => {
                let limit = orbit.limit().expect("converged orbits have a limit");
                format!(
                    "converged in {} steps (|limit| = {:.2e})",
                    orbit.steps_used,
                    limit.norm()
                )
            }
            OrbitFate::HitPole(step) => format!("hit a pole at step {step}"),
            OrbitFate::Overflowed(step) => format!("overflowed at step {step}"),
            OrbitFate::BudgetExhausted => String::from("budget exhausted"),
        };
        println!("orbit of {z0}: {fate}");
    }
    println!();

    // Symmetry identities, exact in floating point:
    //   f(-z) = f(z)            (the map is even)
    //   f_conj(lambda)(conj z) = conj(f_lambda(z))
    //   f_{-lambda}(z) = -f_lambda(z)
    let z = Complex64::new(0.7, -0.4);
    let neg = Parameter::new(-p.lambda()).expect("nonzero");
    let conj = Parameter::new(p.lambda().conj()).expect("nonzero");
    let finite = |w: tanz2::map::ExtComplex| w.as_finite().expect("regular point");
    println!("f(z)        = {}", finite(eval(p, z)));
    println!("f(-z)       = {}", finite(eval(p, -z)));
    println!("conj f(conj z) under conj lambda = {}", finite(eval(conj, z.conj())).conj());
    println!("-f(z) under -lambda              = {}", -finite(eval(neg, z)));
    println!();

    // The derivative 2 lambda z sec^2(z^2) drives multiplier computations.
    println!("f'({z}) = {}", derivative(p, z).unwrap());
    println!("f'(0)   = {} (the origin is superattracting)", derivative(p, Complex64::new(0.0, 0.0)).unwrap());
}
