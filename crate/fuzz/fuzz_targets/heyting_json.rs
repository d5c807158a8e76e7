#![no_main]

use libfuzzer_sys::fuzz_target;
use sdgqm::logic::HeytingAlgebra;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(h) = HeytingAlgebra::from_json(text) else { return };
    assert_eq!(h.adjunction_violation(), None);
    let again = HeytingAlgebra::from_lattice_json(&h.to_lattice_json()).expect("serialized lattice parses");
    assert_eq!(again.len(), h.len());
});
