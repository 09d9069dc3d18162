use splitmat_cli::doc::{print_pretty, CertificateDocument, MatrixDocument};
use splitmat_core::{
    pad_three_idempotents_char2, pad_three_squarezero, random_trace_zero, sum_four_squarezero,
    Field, FieldDescriptor, Matrix, Scalar,
};

fn all_fields() -> Vec<Field> {
    vec![
        FieldDescriptor::rationals(),
        FieldDescriptor::prime_field(2).unwrap(),
        FieldDescriptor::prime_field(3).unwrap(),
        FieldDescriptor::extension_field(2, &[1, 1, 1]).unwrap(),
        FieldDescriptor::prime_field(5).unwrap(),
    ]
}

fn char2_fields() -> Vec<Field> {
    vec![
        FieldDescriptor::prime_field(2).unwrap(),
        FieldDescriptor::extension_field(2, &[1, 1, 1]).unwrap(),
    ]
}

fn assert_matrix_doc_round_trip(m: &Matrix) {
    let doc = MatrixDocument::new(m);
    let text = print_pretty(&doc);
    let parsed: MatrixDocument = serde_json::from_str(&text).expect("document parses");
    assert_eq!(print_pretty(&parsed), text, "re-emission is byte-identical");
    assert_eq!(&parsed.to_matrix().unwrap(), m, "round trip is lossless");
}

fn assert_certificate_doc_round_trip(kind: &str, cert: &splitmat_core::Certificate) {
    let doc = CertificateDocument::from_certificate(kind, cert);
    let text = print_pretty(&doc);
    let parsed: CertificateDocument = serde_json::from_str(&text).expect("document parses");
    assert_eq!(print_pretty(&parsed), text, "re-emission is byte-identical");
    let rebuilt = parsed.to_certificate().unwrap();
    assert!(rebuilt.verify().passed(), "re-verification after parse passes");
    assert_eq!(rebuilt.target, cert.target);
    assert_eq!(rebuilt.summands, cert.summands);
    assert_eq!(rebuilt.coefficients, cert.coefficients);
}

#[test]
fn criterion_10_serialization_round_trips() {
    let mut documents = 0usize;

    for (i, field) in all_fields().iter().enumerate() {
        for j in 0..160 {
            let n = 1 + (j % 5);
            let m = random_trace_zero(field, n, 0xC10_0000 + (i * 160 + j) as u64).unwrap();
            assert_matrix_doc_round_trip(&m);
            documents += 1;
        }
    }

    for (i, field) in all_fields().iter().enumerate() {
        for j in 0..20 {
            let n = 1 + (j % 3);
            let m = random_trace_zero(field, n, 0xCE47_0000 + (i * 20 + j) as u64).unwrap();
            assert_certificate_doc_round_trip("sq4", &sum_four_squarezero(&m).unwrap());
            documents += 1;
        }
    }

    for (i, field) in all_fields().iter().enumerate() {
        for j in 0..10 {
            let n = 1 + (j % 2);
            let m = random_trace_zero(field, n, 0x3AD_0000 + (i * 10 + j) as u64).unwrap();
            assert_certificate_doc_round_trip("sq3pad", &pad_three_squarezero(&m).unwrap());
            documents += 1;
        }
    }

    for (i, field) in char2_fields().iter().enumerate() {
        for j in 0..25 {
            let n = 1 + (j % 3);
            let mut m = random_trace_zero(field, n, 0x1DE_0000 + (i * 25 + j) as u64).unwrap();
            if j % 2 == 1 {
                let bump = m.get(0, 0).add(&Scalar::one(field));
                m.set(0, 0, bump);
            }
            assert_certificate_doc_round_trip(
                "idem3pad",
                &pad_three_idempotents_char2(&m).unwrap(),
            );
            documents += 1;
        }
    }

    assert_eq!(documents, 1000);
    println!("criterion 10 (serialization: 1000 byte-identical document round-trips): pass");
}
