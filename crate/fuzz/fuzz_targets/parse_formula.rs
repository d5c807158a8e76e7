#![no_main]

use libfuzzer_sys::fuzz_target;
use sdgqm::logic::{check_validity, parse_formula, HeytingAlgebra};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(phi) = parse_formula(text) else { return };
    let printed = phi.to_string();
    assert_eq!(parse_formula(&printed).as_ref(), Ok(&phi), "{printed}");
    if phi.variables().len() <= 4 {
        let _ = check_validity(&phi, &HeytingAlgebra::chain(3).unwrap());
    }
});
