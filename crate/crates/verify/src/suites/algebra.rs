use heatkernel::clifford::{all_words, CliffordElement, SupertraceMethod};
use heatkernel::equivariant::{equivariant_supertrace, phi_tilde_supertrace};
use heatkernel::multivector::BasisWord;
use heatkernel::scalar::{format_rational, parity_sign};
use heatkernel::{Rational, Scalar};
use num_traits::Zero;

use super::{err_text, Outcome, Runner};
use crate::sample;

fn word_label(w: BasisWord, n: usize) -> String {
    let idx = |mask: u32| {
        (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
    };
    format!("c{{{}}}chat{{{}}}", idx(w.e), idx(w.ehat))
}

pub(super) fn run(runner: &mut Runner) {
    let cfg = runner.config;
    for &n in &cfg.dims {
        // nonzero supertraces of all normal-ordered words, by both routes
        runner.check(&format!("supertrace_table/n={n}"), "", || {
            let mut entries = Vec::new();
            for w in all_words(n) {
                let x = CliffordElement::word(n, w, Rational::from_i64(1));
                let berezin = x.supertrace(SupertraceMethod::Berezin).map_err(err_text)?;
                let matrix = x.supertrace(SupertraceMethod::Matrix).map_err(err_text)?;
                if berezin != matrix {
                    return Err(format!("{}: berezin {berezin} matrix {matrix}", word_label(w, n)));
                }
                if !berezin.is_zero() {
                    entries.push(format!("{}={}", word_label(w, n), format_rational(&berezin)));
                }
            }
            let top: Rational = parity_sign::<Rational>(n / 2) * Rational::from_i64(1 << n);
            let expected = format!("{}={}", word_label(BasisWord::full(n), n), format_rational(&top));
            Ok(Outcome::exact(expected, entries.join(";")))
        });

        for s in 0..cfg.samples {
            let name = format!("equivariant_decomposition/n={n}/sample={s}");
            let mut rng = sample::rng_for(cfg.seed, &name);
            let a = 2 * (s % (n / 2 + 1));
            runner.check(&name, &format!("a={a}"), || {
                let iso = sample::isometry(&mut rng, n, a);
                let op = sample::clifford_element(&mut rng, n, 6);
                let st = equivariant_supertrace(&iso, &op).map_err(err_text)?;
                Ok(Outcome::exact(format_rational(&st.matrix), format_rational(&st.decomposition())))
            });
        }

        let name = format!("phi_tilde_supertrace/n={n}");
        let mut rng = sample::rng_for(cfg.seed, &name);
        runner.check(&name, "a=0", || {
            let iso = sample::isometry(&mut rng, n, 0);
            let st = phi_tilde_supertrace(&iso).map_err(err_text)?;
            Ok(Outcome::exact(format_rational(&iso.det_one_minus_normal()), format_rational(&st)))
        });
    }
}
