//! Tabulate q-logarithms and q-exponentials, including clipping and the pole.
use annealing_paths::{q_exp, q_log};

fn main() -> annealing_paths::Result<()> {
    let qs = [0.0, 0.5, 1.0, 1.5, 2.0];
    print!("{:>8}", "u");
    for q in qs {
        print!("{:>14}", format!("log_{q}(u)"));
    }
    println!();
    for u in [0.1, 0.5, 1.0, 2.0, 10.0] {
        print!("{u:>8}");
        for q in qs {
            print!("{:>14.6}", q_log(u, q)?);
        }
        println!();
    }

    println!("\nround trips exp_q(log_q(u)):");
    for q in qs {
        let back = q_exp(q_log(3.0, q)?, q);
        println!("  q = {q}: {back}");
    }

    println!("\nq = 0.5 clips below t = -2: exp_q(-2.5) = {}", q_exp(-2.5, 0.5));
    println!("q = 2 has a pole at t = 1:  exp_q(0.999) = {:.1}, exp_q(1.0) = {}", q_exp(0.999, 2.0), q_exp(1.0, 2.0));
    Ok(())
}
