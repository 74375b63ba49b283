mod common;

use std::io::Write;
use std::net::TcpListener;
use std::thread;
use std::time::{Duration, Instant};

use common::{cfg, connect, keypair, prover_opts, rng, spawn_prover, Tap, TamperResponse};
use minrank_core::protocol::Challenge;
use minrank_id::endpoint::*;
use minrank_id::transcript::TranscriptFile;
use minrank_id::wire::{read_frame, write_frame, ErrorPayload, Frame, FrameType};

fn vopts(rounds: u32) -> VerifierOptions {
    VerifierOptions { config: cfg(), rounds, forced_challenge: None }
}

#[test]
fn loopback_at_recommended_parameters() {
    let kp = keypair(2, 26, 209, 13, 1);
    let pk = kp.pk.clone();
    let start = Instant::now();
    let (addr, prover) = spawn_prover(kp, prover_opts(), 2);
    let mut s = connect(&addr);
    let out = verifier_endpoint(&pk, &vopts(128), &mut s, &mut rng(3)).unwrap();
    let p = prover.join().unwrap().unwrap();
    assert!(start.elapsed() < Duration::from_secs(60));
    assert!(out.accepted);
    assert_eq!(p, ProverOutcome { rounds_played: 128, accepted: true });
    assert_eq!(out.transcript.records.len(), 128);
    let replayed = TranscriptFile::decode(&out.transcript.encode()).unwrap().replay(&pk).unwrap();
    assert!(replayed.iter().all(|(recorded, again)| recorded == again && recorded.is_accept()));
}

#[test]
fn frames_follow_the_session_order() {
    let kp = keypair(2, 5, 6, 2, 4);
    let pk = kp.pk.clone();
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = l.local_addr().unwrap();
    let prover = thread::spawn(move || {
        let (s, _) = l.accept().unwrap();
        let mut tap = Tap::new(s);
        let out = prover_endpoint(&kp, &prover_opts(), &mut tap, &mut rng(5)).unwrap();
        (out, tap.sent)
    });
    let mut tap = Tap::new(connect(&addr.to_string()));
    let out = verifier_endpoint(&pk, &vopts(20), &mut tap, &mut rng(6)).unwrap();
    let (pout, psent) = prover.join().unwrap();
    assert!(out.accepted && pout.accepted);
    let mut expected_v = vec![FrameType::SessionHeader];
    expected_v.extend([FrameType::Challenge, FrameType::Verdict].repeat(20));
    assert_eq!(tap.sent, expected_v);
    assert_eq!(psent, [FrameType::Commit, FrameType::Response].repeat(20));
}

#[test]
fn mismatched_parameters_abort_at_the_header() {
    let kp = keypair(2, 6, 8, 3, 7);
    let other = keypair(2, 5, 8, 2, 8);
    let (addr, prover) = spawn_prover(kp, prover_opts(), 9);
    let mut tap = Tap::new(connect(&addr));
    let err = verifier_endpoint(&other.pk, &vopts(5), &mut tap, &mut rng(10)).unwrap_err();
    assert!(matches!(err, EndpointError::Remote { code: CODE_MISMATCH, .. }), "{err}");
    assert_eq!(tap.sent, [FrameType::SessionHeader]);
    assert!(matches!(prover.join().unwrap(), Err(EndpointError::Mismatch(_))));

    // same parameters, different key
    let kp = keypair(2, 6, 8, 3, 11);
    let stranger = keypair(2, 6, 8, 3, 12);
    let (addr, prover) = spawn_prover(kp, prover_opts(), 13);
    let err = verifier_endpoint(&stranger.pk, &vopts(5), &mut connect(&addr), &mut rng(14)).unwrap_err();
    assert!(matches!(err, EndpointError::Remote { code: CODE_MISMATCH, .. }));
    assert!(prover.join().unwrap().is_err());
}

#[test]
fn tampered_response_is_rejected_and_both_sides_stop() {
    let kp = keypair(2, 6, 8, 3, 15);
    let pk = kp.pk.clone();
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = l.local_addr().unwrap();
    let prover = thread::spawn(move || {
        let (s, _) = l.accept().unwrap();
        // byte 2 is inside the first seed or matrix of every response layout
        let mut t = TamperResponse { inner: s, offset: 2, done: false };
        prover_endpoint(&kp, &prover_opts(), &mut t, &mut rng(16))
    });
    let out = verifier_endpoint(&pk, &vopts(10), &mut connect(&addr.to_string()), &mut rng(17)).unwrap();
    assert!(!out.accepted);
    assert_eq!(out.transcript.records.len(), 1);
    assert!(!out.transcript.records[0].verdict.is_accept());
    assert_eq!(prover.join().unwrap().unwrap(), ProverOutcome { rounds_played: 1, accepted: false });
    let replay = TranscriptFile::decode(&out.transcript.encode()).unwrap().replay(&pk).unwrap();
    assert_eq!(replay[0].0, replay[0].1);
}

#[test]
fn forced_challenge_reuses_the_request() {
    let kp = keypair(2, 4, 5, 2, 18);
    let pk = kp.pk.clone();
    let (addr, prover) = spawn_prover(kp, prover_opts(), 19);
    let opts = VerifierOptions { forced_challenge: Some(Challenge::new(3).unwrap()), ..vopts(6) };
    let out = verifier_endpoint(&pk, &opts, &mut connect(&addr), &mut rng(20)).unwrap();
    assert!(out.accepted && prover.join().unwrap().unwrap().accepted);
    assert!(out.transcript.records.iter().all(|r| r.challenge.value() == 3));
}

#[test]
fn silent_peer_times_out_with_an_error_frame() {
    let kp = keypair(2, 4, 5, 2, 21);
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = l.local_addr().unwrap();
    let peer = thread::spawn(move || {
        let (mut s, _) = l.accept().unwrap();
        let header = read_frame(&mut s).unwrap();
        let next = read_frame(&mut s).unwrap();
        (header.kind, next)
    });
    let mut s = connect(&addr.to_string());
    s.set_read_timeout(Some(Duration::from_millis(200))).unwrap();
    let err = verifier_endpoint(&kp.pk, &vopts(3), &mut s, &mut rng(22)).unwrap_err();
    assert!(matches!(err, EndpointError::Timeout), "{err}");
    let (first, next) = peer.join().unwrap();
    assert_eq!(first, FrameType::SessionHeader);
    assert_eq!(next.kind, FrameType::Error);
    assert_eq!(ErrorPayload::decode(&next.payload).unwrap().code, CODE_TIMEOUT);
}

#[test]
fn deadline_reader_times_out_on_pipes() {
    let (r, _w) = std::io::pipe().unwrap();
    let (_r2, w2) = std::io::pipe().unwrap();
    let kp = keypair(2, 4, 5, 2, 23);
    let mut t = Duplex { reader: DeadlineReader::spawn(r, Some(Duration::from_millis(100))), writer: w2 };
    let err = prover_endpoint(&kp, &prover_opts(), &mut t, &mut rng(24)).unwrap_err();
    assert!(matches!(err, EndpointError::Timeout));
}

#[test]
fn closed_transport_mid_round() {
    let kp = keypair(2, 4, 5, 2, 25);
    let pk = kp.pk.clone();
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = l.local_addr().unwrap();
    let peer = thread::spawn(move || {
        let (mut s, _) = l.accept().unwrap();
        read_frame(&mut s).unwrap();
        // a commit, then hang up
        let (_, y) = minrank_core::protocol::prover_commit(&kp, &cfg(), &mut rng(26)).unwrap();
        write_frame(&mut s, &Frame::new(FrameType::Commit, minrank_id::codec::encode_commitment(&y))).unwrap();
        read_frame(&mut s).unwrap();
    });
    let err = verifier_endpoint(&pk, &vopts(3), &mut connect(&addr.to_string()), &mut rng(27)).unwrap_err();
    peer.join().unwrap();
    assert!(matches!(err, EndpointError::Closed), "{err}");
}

#[test]
fn out_of_order_frame_is_a_protocol_error() {
    let kp = keypair(2, 4, 5, 2, 28);
    let pk = kp.pk.clone();
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = l.local_addr().unwrap();
    let peer = thread::spawn(move || {
        let (mut s, _) = l.accept().unwrap();
        read_frame(&mut s).unwrap();
        write_frame(&mut s, &Frame::new(FrameType::Verdict, vec![0, 0xff, 0])).unwrap();
        let reply = read_frame(&mut s).unwrap();
        s.flush().unwrap();
        reply
    });
    let err = verifier_endpoint(&pk, &vopts(3), &mut connect(&addr.to_string()), &mut rng(29)).unwrap_err();
    assert!(matches!(err, EndpointError::UnexpectedFrame { expected: FrameType::Commit, got: FrameType::Verdict }));
    let reply = peer.join().unwrap();
    assert_eq!(reply.kind, FrameType::Error);
    assert_eq!(reply.payload[0], CODE_UNEXPECTED_FRAME);
}

#[test]
fn concurrent_sessions_are_isolated() {
    let kp = keypair(2, 6, 8, 3, 30);
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = l.local_addr().unwrap().to_string();
    let server_kp = kp.clone();
    let server = thread::spawn(move || {
        let mut hs = Vec::new();
        for i in 0..4u64 {
            let (mut s, _) = l.accept().unwrap();
            let kp = server_kp.clone();
            hs.push(thread::spawn(move || prover_endpoint(&kp, &prover_opts(), &mut s, &mut rng(100 + i))));
        }
        hs.into_iter().map(|h| h.join().unwrap().unwrap()).collect::<Vec<_>>()
    });
    let clients: Vec<_> = (0..4u64)
        .map(|i| {
            let pk = kp.pk.clone();
            let addr = addr.clone();
            thread::spawn(move || verifier_endpoint(&pk, &vopts(30), &mut connect(&addr), &mut rng(200 + i)).unwrap())
        })
        .collect();
    for c in clients {
        assert!(c.join().unwrap().accepted);
    }
    assert!(server.join().unwrap().iter().all(|o| o.accepted && o.rounds_played == 30));
}
