#![no_main]

use libfuzzer_sys::fuzz_target;
use num_rational::BigRational;
use sdgqm::linalg::JetMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = JetMatrix::<f64>::from_json(text, None) {
        let again = JetMatrix::<f64>::from_json(&m.to_json(), None).expect("serialized matrix parses");
        assert_eq!((again.rows(), again.cols()), (m.rows(), m.cols()));
    }
    if let Ok(m) = JetMatrix::<BigRational>::from_json(text, None) {
        let again = JetMatrix::<BigRational>::from_json(&m.to_json(), None).expect("serialized matrix parses");
        assert_eq!(again, m);
    }
});
