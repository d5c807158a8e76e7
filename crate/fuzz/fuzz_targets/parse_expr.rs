#![no_main]

use libfuzzer_sys::fuzz_target;
use sdgqm::scalar::Backend;
use sdgqm::weil::{parse_expr, AlgebraSpec, Jet};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(expr) = parse_expr(text) else { return };
    // printing and reparsing gives the same tree
    let printed = expr.to_string();
    assert_eq!(parse_expr(&printed).as_ref(), Ok(&expr), "{printed}");
    if expr.free_variables().len() <= 1 {
        let alg = AlgebraSpec::truncated("h", 2, Backend::Approx).unwrap();
        let x = Jet::<f64>::generator(&alg, "h").unwrap().add_scalar(&0.5);
        let _ = expr.eval_at(&x);
    }
});
