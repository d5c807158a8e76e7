#![no_main]

use libfuzzer_sys::fuzz_target;
use sdgqm::weil::AlgebraSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = AlgebraSpec::from_json(text) else { return };
    let again = AlgebraSpec::from_json(&spec.to_json()).expect("serialized spec parses");
    assert_eq!(again.dim(), spec.dim());
});
