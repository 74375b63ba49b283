mod common;

use common::{keypair, params, random_response, rng, Rng};
use minrank_core::encoding::{decode_matrix, matrix_bytes};
use minrank_core::protocol::{
    prover_commit, verifier_challenge, verify_round, Challenge, Check, CommitmentBundle, RejectReason, RoundRecord,
    Verdict,
};
use minrank_core::{random_matrix, ByteStream, Digest, Field, HashAlg, Matrix};
use minrank_id::codec::*;
use minrank_id::transcript::TranscriptFile;
use minrank_id::wire::{ErrorPayload, Frame, FrameType, SessionHeader, MAX_PAYLOAD};

fn coin(r: &mut Rng, n: usize) -> usize {
    let mut b = [0u8; 8];
    r.fill(&mut b);
    (u64::from_le_bytes(b) % n as u64) as usize
}

#[test]
fn random_matrices_round_trip() {
    let mut r = rng(1);
    for i in 0..10_000 {
        let q = [2, 3, 5][i % 3];
        let f = Field::new(q).unwrap();
        let (rows, cols) = (1 + coin(&mut r, 12), 1 + coin(&mut r, 70));
        let m = random_matrix(&mut r, f, rows, cols);
        assert_eq!(decode_matrix(f, rows, cols, &matrix_bytes(&m)).unwrap(), m);
    }
}

#[test]
fn gf2_identity_packing() {
    let i2 = Matrix::identity(Field::GF2, 2);
    assert_eq!(matrix_bytes(&i2), [0x01, 0x02]);
}

#[test]
fn keys_round_trip() {
    for (i, (q, n, m, r)) in [(2, 4, 5, 2), (3, 3, 4, 1), (5, 5, 3, 2), (257, 3, 3, 1), (2, 26, 20, 13)].into_iter().enumerate() {
        let kp = keypair(q, n, m, r, i as u64);
        let pk_bytes = encode_pk(&kp.pk, HashAlg::Sha256);
        let sk_bytes = encode_sk(&kp.sk, kp.pk.params(), HashAlg::Sha256);
        let (h, pk) = decode_pk(&pk_bytes).unwrap();
        let (h2, p2, sk) = decode_sk(&sk_bytes).unwrap();
        assert_eq!((h, h2), (HashAlg::Sha256, HashAlg::Sha256));
        assert_eq!(pk, kp.pk);
        assert_eq!((&p2, &sk), (kp.pk.params(), &kp.sk));
        let f = kp.pk.params().field();
        let per = if q == 2 { n * n.div_ceil(8) } else { n * n * f.element_bytes() };
        assert_eq!(pk_bytes.len(), KEY_HEADER_LEN + m * per);
    }
}

#[test]
fn messages_round_trip() {
    let mut r = rng(2);
    for i in 0..10_000 {
        let q = [2, 3, 5][i % 3];
        let p = params(q, 2 + coin(&mut r, 9), 2 + coin(&mut r, 20), 1);
        let seed_len = 1 + coin(&mut r, 32);
        let shape = ResponseShape { params: p, seed_len };
        let c = (i % 4) as u8;
        let z = random_response(&p, seed_len, c, &mut r);
        let bytes = response_bytes(&z);
        assert_eq!(bytes.len(), shape.response_len(c));
        assert_eq!(decode_response(&shape, &bytes).unwrap(), z);

        let mut y = CommitmentBundle { sides: [[Digest([0; 32]); 3]; 2] };
        for d in y.sides.iter_mut().flatten() {
            r.fill(&mut d.0);
        }
        assert_eq!(decode_commitment(&encode_commitment(&y)).unwrap(), y);

        let v = match coin(&mut r, 3) {
            0 => Verdict::Accept,
            1 => Verdict::Reject(RejectReason { side: None, check: Check::Malformed }),
            _ => Verdict::Reject(RejectReason {
                side: Some(coin(&mut r, 2) as u8),
                check: Check::from_code(1 + coin(&mut r, 10) as u8).unwrap(),
            }),
        };
        assert_eq!(decode_verdict(&encode_verdict(&v)).unwrap(), v);

        let mut payload = vec![0u8; coin(&mut r, 300)];
        r.fill(&mut payload);
        let frame = Frame::new(FrameType::from_byte(1 + coin(&mut r, 6) as u8).unwrap(), payload);
        assert_eq!(Frame::decode(&frame.encode()).unwrap(), frame);

        let h = SessionHeader { params: p, rounds: 1 + coin(&mut r, 1000) as u32, hash: HashAlg::Sha256, seed_len: seed_len as u16, pk_fingerprint: y.sides[0][0] };
        assert_eq!(SessionHeader::decode(&h.encode()).unwrap(), h);
    }
}

fn sample_transcript(rounds: usize, seed: u64) -> (minrank_core::KeyPair, TranscriptFile) {
    let kp = keypair(2, 4, 5, 2, seed);
    let cfg = common::cfg();
    let (mut pr, mut vr) = (rng(seed + 1), rng(seed + 2));
    let mut records = Vec::new();
    for _ in 0..rounds {
        let (mut st, y) = prover_commit(&kp, &cfg, &mut pr).unwrap();
        let c = verifier_challenge(&mut vr);
        let z = st.respond(c).unwrap();
        let verdict = verify_round(&kp.pk, cfg.hash, &y, c, &z);
        records.push(RoundRecord { commitment: y, challenge: c, response: z, verdict });
    }
    let header = SessionHeader {
        params: *kp.pk.params(),
        rounds: rounds as u32,
        hash: cfg.hash,
        seed_len: cfg.seed_len as u16,
        pk_fingerprint: pk_fingerprint(&kp.pk, cfg.hash),
    };
    (kp, TranscriptFile { header, started_ms: 1, finished_ms: 2, records })
}

#[test]
fn transcripts_round_trip_and_replay() {
    let (kp, t) = sample_transcript(12, 5);
    let bytes = t.encode();
    let back = TranscriptFile::decode(&bytes).unwrap();
    assert_eq!(back, t);
    assert!(back.accepted());
    assert!(back.replay(&kp.pk).unwrap().iter().all(|(a, b)| a == b));
    assert_eq!(back.to_transcript().records, t.records);
    let other = keypair(2, 4, 5, 2, 99);
    assert!(back.replay(&other.pk).is_err());
}

#[test]
fn distinct_error_codes() {
    let kp = keypair(2, 4, 5, 2, 0);
    let pk = encode_pk(&kp.pk, HashAlg::Sha256);

    assert_eq!(decode_pk(&pk[..pk.len() - 1]), Err(CodecError::Truncated));
    let mut bad = pk.clone();
    bad[0] = b'X';
    assert_eq!(decode_pk(&bad), Err(CodecError::BadMagic));
    let mut bad = pk.clone();
    bad[4] = 9;
    assert_eq!(decode_pk(&bad), Err(CodecError::BadVersion(9)));
    let mut bad = pk.clone();
    bad[5] = 0x7f;
    assert_eq!(decode_pk(&bad), Err(CodecError::UnknownHash(0x7f)));
    let mut bad = pk.clone();
    bad.push(0);
    assert_eq!(decode_pk(&bad), Err(CodecError::TrailingBytes(1)));
    // n = 4 leaves the top nibble of every row as padding
    let mut bad = pk.clone();
    bad[KEY_HEADER_LEN] |= 0x80;
    assert!(matches!(decode_pk(&bad), Err(CodecError::Invalid(_))));
    // r = n
    let mut bad = pk.clone();
    bad[12] = 4;
    assert!(matches!(decode_pk(&bad), Err(CodecError::Invalid(_))));
    // q = 4 is not prime
    let mut bad = pk;
    bad[6] = 4;
    assert!(matches!(decode_pk(&bad), Err(CodecError::Invalid(_))));

    let f = Frame::new(FrameType::Challenge, vec![1]).encode();
    let mut bad = f.clone();
    bad[5] = 0x07;
    assert_eq!(Frame::decode(&bad), Err(CodecError::UnknownFrameType(0x07)));
    let mut bad = f.clone();
    bad[6..10].copy_from_slice(&(MAX_PAYLOAD + 1).to_le_bytes());
    assert_eq!(Frame::decode(&bad), Err(CodecError::TooLarge(MAX_PAYLOAD + 1)));
    assert_eq!(Frame::decode(&f[..f.len() - 1]), Err(CodecError::Truncated));

    let shape = ResponseShape { params: params(3, 2, 3, 1), seed_len: 4 };
    let z = random_response(&shape.params, 4, 1, &mut rng(3));
    let mut bytes = response_bytes(&z);
    *bytes.last_mut().unwrap() = 3;
    assert!(matches!(decode_response(&shape, &bytes), Err(CodecError::Invalid(_))));
    assert!(matches!(decode_response(&shape, &[4]), Err(CodecError::Invalid(_))));

    assert!(decode_verdict(&[0x01, 0x00, 0x0b]).is_err());
    assert!(decode_verdict(&[0x00, 0x00, 0x00]).is_err());
    assert!(ErrorPayload::decode(&[0x20, 0xff]).is_err());
}

#[test]
fn response_sizes_follow_the_model() {
    // (q, n, m) = (2, 26, 209) at 128-bit security
    let p = params(2, 26, 209, 13);
    let shape = ResponseShape { params: p, seed_len: 16 };
    assert_eq!(shape.response_len(0) - 1, 240);
    assert_eq!(shape.response_len(3) - 1, 240);
    assert_eq!(shape.response_len(1) - 1, 74);
    assert_eq!(shape.response_len(2) - 1, 74);

    // model: |Z0| = 2 n^2 log q + 2 seeds, |Z1| = 3 seeds + (m - 1) log q,
    // with the only deviation being byte-aligned rows
    for (q, n, m) in [(2u32, 26usize, 209usize), (2, 33, 331), (2, 39, 469), (2, 5, 7), (3, 6, 9), (5, 4, 4)] {
        let p = params(q, n, m, n / 2);
        let shape = ResponseShape { params: p, seed_len: 16 };
        let bits_per = if q == 2 { 1.0 } else { 8.0 };
        let model_z0 = 2.0 * (n * n) as f64 * bits_per / 8.0 + 32.0;
        let model_z1 = 48.0 + (m - 1) as f64 * bits_per / 8.0;
        let z0 = (shape.response_len(0) - 1) as f64;
        let z1 = (shape.response_len(1) - 1) as f64;
        assert!(z0 >= model_z0 && z0 - model_z0 <= 2.0 * n as f64, "q={q} n={n}");
        assert!(z1 >= model_z1 && z1 - model_z1 < 1.0, "q={q} m={m}");
    }

    // and real responses have exactly that size
    let kp = keypair(2, 26, 209, 13, 4);
    let cfg = common::cfg();
    for c in Challenge::ALL {
        let (mut st, _) = prover_commit(&kp, &cfg, &mut rng(5)).unwrap();
        assert_eq!(response_bytes(&st.respond(c).unwrap()).len(), shape.response_len(c.value()));
    }
}

/// Applies one random mutation: bit flip, byte overwrite, truncation,
/// extension, or a splice of the length field.
fn mutate(src: &[u8], r: &mut Rng) -> Vec<u8> {
    let mut v = src.to_vec();
    match coin(r, 5) {
        0 => {
            let i = coin(r, v.len());
            v[i] ^= 1 << coin(r, 8);
        }
        1 => {
            let i = coin(r, v.len());
            v[i] = r.next_byte();
        }
        2 => v.truncate(coin(r, v.len())),
        3 => {
            for _ in 0..1 + coin(r, 4) {
                v.push(r.next_byte());
            }
        }
        _ => {
            // corrupt a 16-bit field near the front, where headers live
            let i = coin(r, v.len().min(24).saturating_sub(1));
            let x = coin(r, 70_000) as u16;
            v[i..i + 2].copy_from_slice(&x.to_le_bytes());
        }
    }
    v
}

#[test]
fn mutated_inputs_are_rejected_or_canonical() {
    let kp = keypair(2, 4, 5, 2, 7);
    let pk = encode_pk(&kp.pk, HashAlg::Sha256);
    let sk = encode_sk(&kp.sk, kp.pk.params(), HashAlg::Sha256);
    let (_, t) = sample_transcript(3, 8);
    let tr = t.encode();
    let shape = t.shape();
    let z = response_bytes(&t.records[0].response);
    let header = t.header.encode();
    let frame = Frame::new(FrameType::Commit, encode_commitment(&t.records[0].commitment)).encode();
    let mut r = rng(9);
    let mut rejected = 0;
    for i in 0..10_000 {
        match i % 6 {
            0 => {
                let m = mutate(&pk, &mut r);
                match decode_pk(&m) {
                    Ok((h, k)) => assert_eq!(encode_pk(&k, h), m),
                    Err(_) => rejected += 1,
                }
            }
            1 => {
                let m = mutate(&sk, &mut r);
                match decode_sk(&m) {
                    Ok((h, p, k)) => assert_eq!(encode_sk(&k, &p, h), m),
                    Err(_) => rejected += 1,
                }
            }
            2 => {
                let m = mutate(&tr, &mut r);
                match TranscriptFile::decode(&m) {
                    Ok(f) => assert_eq!(f.encode(), m),
                    Err(_) => rejected += 1,
                }
            }
            3 => {
                let m = mutate(&z, &mut r);
                match decode_response(&shape, &m) {
                    Ok(v) => assert_eq!(response_bytes(&v), m),
                    Err(_) => rejected += 1,
                }
            }
            4 => {
                let m = mutate(&header, &mut r);
                match SessionHeader::decode(&m) {
                    Ok(h) => assert_eq!(h.encode(), m),
                    Err(_) => rejected += 1,
                }
            }
            _ => {
                let m = mutate(&frame, &mut r);
                match Frame::decode(&m) {
                    Ok(f) => assert_eq!(f.encode(), m),
                    Err(_) => rejected += 1,
                }
            }
        }
    }
    assert!(rejected > 3000, "only {rejected} mutations rejected");
}
