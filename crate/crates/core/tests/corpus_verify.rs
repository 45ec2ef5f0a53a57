use iwasawa_core::corpus::{verify, CorpusManifest, TheoremId};
use iwasawa_core::Caps;

#[test]
fn bundled_corpus_has_no_failures() {
    let m = CorpusManifest::bundled();
    let s = verify(&m, &TheoremId::ALL, &Caps::default());
    for f in &s.failures {
        eprintln!("{} / {}: {}", f.label, f.theorem, f.witness);
    }
    assert!(s.passed(), "{} failures", s.failures.len());
    assert_eq!(s.theorems["parse"].passed, 36);
    for t in TheoremId::ALL {
        assert_eq!(s.theorems[t.as_str()].passed, 36, "{t}");
    }
}
