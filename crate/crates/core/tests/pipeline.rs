use simplectra::clt::{sigma_exact, sigma_oracle, SigmaParams};
use simplectra::complex::adjacency_matrix;
use simplectra::lm::{centered_scaled, sample_lm, LMParams, LMSample};
use simplectra::spectral::{eigenvalues_sym, moment, moment_trace};
use simplectra::words::{canonical_form, enumerate_pair_sentences, Sentence};

#[test]
fn sample_text_round_trip_keeps_the_spectrum() {
    let s = sample_lm(LMParams::new(14, 2, 0.35, 99).unwrap()).unwrap();
    let back = LMSample::from_text(&s.to_text()).unwrap();
    assert_eq!(back, s);
    let a = eigenvalues_sym(&centered_scaled(&s).unwrap().h).unwrap();
    let b = eigenvalues_sym(&centered_scaled(&back).unwrap().h).unwrap();
    assert_eq!(a, b);
}

#[test]
fn centered_matrix_is_shifted_adjacency() {
    // H = (A(Y) − p·A(K_n))·scale, entry by entry.
    let s = sample_lm(LMParams::new(9, 2, 0.6, 5).unwrap()).unwrap();
    let h = centered_scaled(&s).unwrap();
    let a = adjacency_matrix(&s.complex(), 1).unwrap().to_dmatrix();
    let full = adjacency_matrix(&simplectra::complex::PureComplex::complete(9, 2), 1).unwrap().to_dmatrix();
    let want = (a - full * 0.6) * h.scale;
    assert!((h.h.clone() - want).amax() < 1e-12);
    let esd = eigenvalues_sym(&h.h).unwrap();
    for k in 0..=6 {
        let t = moment_trace(&h.h, k).unwrap();
        assert!((moment(&esd, k) - t).abs() < 1e-9 * t.abs().max(1.0));
    }
}

#[test]
fn sigma_matches_enumeration_above_two_dimensions() {
    for (d, pairs) in [
        (3, &[(2, 2), (2, 4), (3, 3), (4, 4), (3, 5), (4, 6), (5, 5)][..]),
        (4, &[(2, 2), (3, 3), (4, 4), (3, 5)][..]),
    ] {
        let params = SigmaParams::parse(d, "2/7").unwrap();
        for &(k, l) in pairs {
            assert_eq!(sigma_exact(k, l, &params), sigma_oracle(k, l, &params).unwrap(), "d={d} ({k},{l})");
        }
    }
}

#[test]
fn enumerated_sentences_survive_text_round_trip() {
    for a in enumerate_pair_sentences(2, 3, 3, 4).unwrap() {
        let text = a.to_string();
        let back: Sentence = text.parse().unwrap();
        assert_eq!(back, a);
        assert_eq!(canonical_form(&back), a);
    }
}
