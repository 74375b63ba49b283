//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code:
//! 0 success or accept, 1 reject, 2 usage error, 3 protocol or format error.

use std::fs;
use std::io::{self, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minrank_core::estimator::{
    attack_report, comm_cost, param_search, AttackReport, Caps, Estimate, EstimatorParams, Scheme, SearchCaps,
};
use minrank_core::protocol::{
    cheating_prover, extract_secret, simulate_transcript, verifier_challenge, verify_round, Challenge, RoundRecord,
    SessionConfig, Verdict,
};
use minrank_core::{check_solution, keygen, Field, HashAlg, KeyPair, Params, PublicKey, RngStream};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::codec::{decode_pk, decode_sk, encode_pk, encode_sk, pk_fingerprint, response_bytes, CodecError};
use crate::endpoint::{
    prover_endpoint, verifier_endpoint, DeadlineReader, Duplex, EndpointError, ProverOptions, ProverOutcome,
    VerifierOptions, VerifierOutcome,
};
use crate::transcript::TranscriptFile;
use crate::wire::SessionHeader;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PROTOCOL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "minrank-id", version, about = "MinRank zero-knowledge identification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair.
    Keygen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_pk: PathBuf,
        #[arg(long)]
        out_sk: PathBuf,
    },
    /// Serve prover sessions on a socket, or one session over stdio with "-".
    Prove {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        listen: String,
        /// Number of connections to serve; each runs on its own thread.
        #[arg(long, default_value_t = 1)]
        sessions: u32,
        /// Refuse sessions that do not ask for exactly this many rounds.
        #[arg(long)]
        rounds: Option<u32>,
        #[command(flatten)]
        common: SessionArgs,
    },
    /// Run a verifier session against a prover.
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        connect: String,
        #[arg(long, default_value_t = 128)]
        rounds: u32,
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[command(flatten)]
        common: SessionArgs,
    },
    /// Run prover and verifier endpoints in one process.
    RunLocal {
        #[arg(long, default_value_t = 128)]
        rounds: u32,
        #[arg(long, requires = "sk")]
        pk: Option<PathBuf>,
        #[arg(long, requires = "pk")]
        sk: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        /// Ask this challenge in every round instead of a random one.
        #[arg(long, value_parser = parse_challenge)]
        challenge: Option<Challenge>,
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[command(flatten)]
        common: SessionArgs,
    },
    /// Recover a secret from answers to three challenges on one commitment.
    Extract {
        #[arg(long)]
        pk: PathBuf,
        /// Transcript files whose first rounds share a commitment.
        #[arg(long, num_args = 3.., required = true)]
        transcript_set: Vec<PathBuf>,
    },
    /// Produce an accepting transcript for a fixed challenge without the secret.
    Simulate {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long, value_parser = parse_challenge)]
        challenge: Challenge,
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[command(flatten)]
        common: SessionArgs,
    },
    /// Measure how often a prover prepared for two challenges is accepted.
    Cheat {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long, value_parser = parse_pair)]
        pair: [Challenge; 2],
        #[arg(long, default_value_t = 10)]
        rounds: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[command(flatten)]
        common: SessionArgs,
    },
    /// Attack-cost estimates in log2 operations.
    EstimateAttacks {
        #[command(flatten)]
        params: EstimatorArgs,
        #[arg(long, default_value_t = 3.0)]
        omega: f64,
        #[arg(long, default_value_t = Caps::default().mgd_degree)]
        mgd_cap: u32,
        #[arg(long, default_value_t = Caps::default().spp_b)]
        spp_cap: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Rounds and response bandwidth for target security levels.
    EstimateCosts {
        #[arg(long, value_delimiter = ',', default_value = "128")]
        bits: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        /// Only used for validation; defaults to n / 2.
        #[arg(long)]
        r: Option<u64>,
    },
    /// Cheapest parameter sets whose best known attack reaches the target.
    ParamSearch {
        #[arg(long)]
        bits: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 3.0)]
        omega: f64,
        #[arg(long, default_value_t = SearchCaps::default().n_min)]
        n_min: u64,
        #[arg(long, default_value_t = SearchCaps::default().n_max)]
        n_max: u64,
        #[arg(long, default_value_t = SearchCaps::default().m_max)]
        m_max: u64,
        #[arg(long, default_value_t = SearchCaps::default().m_step)]
        m_step: u64,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ParamArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value_t = 26)]
    n: usize,
    #[arg(long, default_value_t = 209)]
    m: usize,
    #[arg(long, default_value_t = 13)]
    r: usize,
}

#[derive(Args, Debug, Clone, Copy)]
struct EstimatorArgs {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    r: u64,
}

#[derive(Args, Debug, Clone, Copy)]
struct SessionArgs {
    /// Seed for all randomness; omit to draw from the operating system.
    #[arg(long)]
    seed: Option<u64>,
    /// Target security in bits; fixes the seed length.
    #[arg(long, default_value_t = 128)]
    security: u32,
    /// Read deadline for each frame from the peer.
    #[arg(long, default_value_t = 30_000)]
    timeout_ms: u64,
}

impl SessionArgs {
    fn entropy(&self) -> Entropy {
        self.seed.map_or(Entropy::Os, Entropy::Seeded)
    }

    fn config(&self) -> SessionConfig {
        SessionConfig::for_security(self.security)
    }

    fn timeout(&self) -> Option<Duration> {
        (self.timeout_ms > 0).then(|| Duration::from_millis(self.timeout_ms))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
}

fn parse_challenge(s: &str) -> Result<Challenge, String> {
    let c: u8 = s.trim().parse().map_err(|_| format!("'{s}' is not a challenge in 0..=3"))?;
    Challenge::new(c).map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> Result<[Challenge; 2], String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("'{s}' is not a pair a,b"))?;
    let pair = [parse_challenge(a)?, parse_challenge(b)?];
    if pair[0] == pair[1] {
        return Err("the two challenges must differ".into());
    }
    Ok(pair)
}

/// Source of randomness. A fixed seed makes every command reproducible;
/// each consumer gets an independent stream named by its label.
#[derive(Clone, Copy, Debug)]
pub enum Entropy {
    Seeded(u64),
    Os,
}

impl Entropy {
    pub fn stream(&self, label: &str) -> RngStream<ChaCha20Rng> {
        match self {
            Entropy::Seeded(seed) => {
                let d = HashAlg::Sha256.hash(&[b"minrank-id/seed", label.as_bytes(), &seed.to_le_bytes()]);
                RngStream(ChaCha20Rng::from_seed(d.0))
            }
            Entropy::Os => RngStream(ChaCha20Rng::from_rng(&mut rand::rng())),
        }
    }
}

enum Failure {
    Usage(String),
    Protocol(String),
}

impl From<EndpointError> for Failure {
    fn from(e: EndpointError) -> Self {
        Failure::Protocol(e.to_string())
    }
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        Failure::Protocol(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Protocol(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn protocol<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Protocol(e.to_string())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = dispatch(cli.command, out, err);
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Protocol(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_PROTOCOL
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Keygen { params, seed, out_pk, out_sk } => cmd_keygen(params, seed, &out_pk, &out_sk, out),
        Command::Prove { sk, pk, listen, sessions, rounds, common } => {
            cmd_prove(&sk, &pk, &listen, sessions, rounds, common, out, err)
        }
        Command::Verify { pk, connect, rounds, transcript, common } => {
            cmd_verify(&pk, &connect, rounds, transcript.as_deref(), common, out, err)
        }
        Command::RunLocal { rounds, pk, sk, params, challenge, transcript, common } => {
            cmd_run_local(rounds, pk.as_deref().zip(sk.as_deref()), params, challenge, transcript.as_deref(), common, out)
        }
        Command::Extract { pk, transcript_set } => cmd_extract(&pk, &transcript_set, out),
        Command::Simulate { pk, challenge, transcript, common } => {
            cmd_simulate(&pk, challenge, transcript.as_deref(), common, out)
        }
        Command::Cheat { pk, pair, rounds, trials, common } => cmd_cheat(&pk, pair, rounds, trials, common, out),
        Command::EstimateAttacks { params, omega, mgd_cap, spp_cap, format } => {
            let p = EstimatorParams::new(params.q, params.n, params.m, params.r, omega).map_err(usage)?;
            let report = attack_report(&p, Caps { mgd_degree: mgd_cap, spp_b: spp_cap });
            write_attack_report(&report, format, out)?;
            Ok(EXIT_OK)
        }
        Command::EstimateCosts { bits, q, n, m, r } => cmd_estimate_costs(&bits, q, n, m, r, out),
        Command::ParamSearch { bits, q, omega, n_min, n_max, m_max, m_step, limit } => {
            let caps = SearchCaps { n_min, n_max, m_max, m_step, ..SearchCaps::default() };
            if n_min > n_max || m_step == 0 {
                return Err(usage("empty search range"));
            }
            cmd_param_search(bits, q, omega, caps, limit, out)
        }
    }
}

fn params_from(a: ParamArgs) -> Result<Params, Failure> {
    let field = Field::new(a.q).map_err(usage)?;
    Params::new(field, a.n, a.m, a.r).map_err(usage)
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| protocol(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| protocol(format!("{}: {e}", path.display())))
}

fn load_pk(path: &Path) -> Result<(HashAlg, PublicKey), Failure> {
    decode_pk(&read_file(path)?).map_err(|e| protocol(format!("{}: {e}", path.display())))
}

fn load_keypair(sk: &Path, pk: &Path) -> Result<(HashAlg, KeyPair), Failure> {
    let (hash, pk) = load_pk(pk)?;
    let (sk_hash, sk_params, sk) = decode_sk(&read_file(sk)?).map_err(|e| protocol(format!("{}: {e}", sk.display())))?;
    if sk_hash != hash || &sk_params != pk.params() {
        return Err(protocol("secret and public key headers disagree"));
    }
    Ok((hash, KeyPair::new(pk, sk).map_err(protocol)?))
}

fn cmd_keygen(a: ParamArgs, seed: Option<u64>, out_pk: &Path, out_sk: &Path, out: &mut dyn Write) -> CmdResult {
    let params = params_from(a)?;
    let entropy = seed.map_or(Entropy::Os, Entropy::Seeded);
    let kp = keygen(params, &mut entropy.stream("keygen")).map_err(protocol)?;
    let hash = HashAlg::Sha256;
    let pk_bytes = encode_pk(&kp.pk, hash);
    let sk_bytes = encode_sk(&kp.sk, &params, hash);
    write_file(out_pk, &pk_bytes)?;
    write_file(out_sk, &sk_bytes)?;
    writeln!(out, "public key: {} ({} bytes)", out_pk.display(), pk_bytes.len())?;
    writeln!(out, "secret key: {} ({} bytes)", out_sk.display(), sk_bytes.len())?;
    writeln!(out, "fingerprint: {}", hex::encode(pk_fingerprint(&kp.pk, hash).as_bytes()))?;
    Ok(EXIT_OK)
}

fn prover_summary(o: &ProverOutcome) -> String {
    if o.accepted {
        format!("accepted after {} rounds", o.rounds_played)
    } else {
        format!("rejected in round {}", o.rounds_played)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_prove(
    sk: &Path,
    pk: &Path,
    listen: &str,
    sessions: u32,
    rounds: Option<u32>,
    common: SessionArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let (hash, kp) = load_keypair(sk, pk)?;
    let opts = ProverOptions { hash, expected_rounds: rounds };
    let entropy = common.entropy();
    if listen == "-" {
        let mut t = Duplex { reader: DeadlineReader::spawn(io::stdin(), common.timeout()), writer: io::stdout() };
        let outcome = prover_endpoint(&kp, &opts, &mut t, &mut entropy.stream("prove/0"))?;
        writeln!(err, "session 0: {}", prover_summary(&outcome))?;
        return Ok(if outcome.accepted { EXIT_OK } else { EXIT_REJECT });
    }
    let listener = TcpListener::bind(listen).map_err(|e| protocol(format!("{listen}: {e}")))?;
    writeln!(out, "listening on {}", listener.local_addr()?)?;
    out.flush()?;
    let mut handles = Vec::new();
    for i in 0..sessions {
        let (stream, _) = listener.accept()?;
        stream.set_read_timeout(common.timeout())?;
        let kp = kp.clone();
        let mut rng = entropy.stream(&format!("prove/{i}"));
        handles.push(thread::spawn(move || {
            let mut stream = stream;
            prover_endpoint(&kp, &opts, &mut stream, &mut rng)
        }));
    }
    let mut code = EXIT_OK;
    for (i, h) in handles.into_iter().enumerate() {
        match h.join().map_err(|_| protocol("session thread panicked"))? {
            Ok(o) => {
                writeln!(out, "session {i}: {}", prover_summary(&o))?;
                if !o.accepted {
                    code = code.max(EXIT_REJECT);
                }
            }
            Err(e) => {
                writeln!(out, "session {i}: error: {e}")?;
                code = EXIT_PROTOCOL;
            }
        }
    }
    Ok(code)
}

fn verdict_summary(outcome: &VerifierOutcome) -> String {
    let t = &outcome.transcript;
    match t.records.last().map(|r| r.verdict) {
        Some(Verdict::Reject(reason)) => {
            let side = reason.side.map_or("-".to_string(), |s| s.to_string());
            format!("reject in round {}: side {side}, check {:?}", t.records.len(), reason.check)
        }
        _ => format!("accept: {} of {} rounds", t.records.len(), t.header.rounds),
    }
}

fn finish_verifier(outcome: &VerifierOutcome, transcript: Option<&Path>, report: &mut dyn Write) -> CmdResult {
    if let Some(path) = transcript {
        write_file(path, &outcome.transcript.encode())?;
    }
    writeln!(report, "{}", verdict_summary(outcome))?;
    Ok(if outcome.accepted { EXIT_OK } else { EXIT_REJECT })
}

fn cmd_verify(
    pk: &Path,
    connect: &str,
    rounds: u32,
    transcript: Option<&Path>,
    common: SessionArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let (_, pk) = load_pk(pk)?;
    if rounds == 0 {
        return Err(usage("--rounds must be positive"));
    }
    let opts = VerifierOptions { config: common.config(), rounds, forced_challenge: None };
    let mut rng = common.entropy().stream("verify");
    if connect == "-" {
        let mut t = Duplex { reader: DeadlineReader::spawn(io::stdin(), common.timeout()), writer: io::stdout() };
        let outcome = verifier_endpoint(&pk, &opts, &mut t, &mut rng)?;
        return finish_verifier(&outcome, transcript, err);
    }
    let mut stream = TcpStream::connect(connect).map_err(|e| protocol(format!("{connect}: {e}")))?;
    stream.set_read_timeout(common.timeout())?;
    let outcome = verifier_endpoint(&pk, &opts, &mut stream, &mut rng)?;
    finish_verifier(&outcome, transcript, out)
}

fn cmd_run_local(
    rounds: u32,
    keys: Option<(&Path, &Path)>,
    params: ParamArgs,
    challenge: Option<Challenge>,
    transcript: Option<&Path>,
    common: SessionArgs,
    out: &mut dyn Write,
) -> CmdResult {
    if rounds == 0 {
        return Err(usage("--rounds must be positive"));
    }
    let entropy = common.entropy();
    let (hash, kp) = match keys {
        Some((pk, sk)) => load_keypair(sk, pk)?,
        None => (HashAlg::Sha256, keygen(params_from(params)?, &mut entropy.stream("keygen")).map_err(protocol)?),
    };
    let config = SessionConfig { hash, ..common.config() };
    let opts = VerifierOptions { config, rounds, forced_challenge: challenge };
    let outcome = local_session(&kp, hash, &opts, entropy)?;
    let mut counts = [0usize; 4];
    for r in &outcome.transcript.records {
        counts[r.challenge.value() as usize] += 1;
    }
    finish_verifier(&outcome, transcript, out)?;
    writeln!(out, "challenges: c0={} c1={} c2={} c3={}", counts[0], counts[1], counts[2], counts[3])?;
    Ok(if outcome.accepted { EXIT_OK } else { EXIT_REJECT })
}

/// Runs both endpoints in this process over a pair of OS pipes, the prover
/// on its own thread.
pub fn local_session(
    kp: &KeyPair,
    hash: HashAlg,
    opts: &VerifierOptions,
    entropy: Entropy,
) -> Result<VerifierOutcome, EndpointError> {
    let (to_prover_r, to_prover_w) = io::pipe()?;
    let (to_verifier_r, to_verifier_w) = io::pipe()?;
    let mut prover_side = Duplex { reader: to_prover_r, writer: to_verifier_w };
    let mut verifier_side = Duplex { reader: to_verifier_r, writer: to_prover_w };
    let prover_opts = ProverOptions { hash, expected_rounds: Some(opts.rounds) };
    let mut prover_rng = entropy.stream("prove/0");
    let mut verifier_rng = entropy.stream("verify");
    thread::scope(|s| {
        let prover = s.spawn(move || prover_endpoint(kp, &prover_opts, &mut prover_side, &mut prover_rng));
        let verdict = verifier_endpoint(&kp.pk, opts, &mut verifier_side, &mut verifier_rng);
        drop(verifier_side);
        let prover = prover.join().expect("prover thread panicked");
        let outcome = verdict?;
        prover?;
        Ok(outcome)
    })
}

fn load_transcript(path: &Path) -> Result<TranscriptFile, Failure> {
    TranscriptFile::decode(&read_file(path)?).map_err(|e| protocol(format!("{}: {e}", path.display())))
}

fn cmd_extract(pk_path: &Path, files: &[PathBuf], out: &mut dyn Write) -> CmdResult {
    let (_, pk) = load_pk(pk_path)?;
    let transcripts = files.iter().map(|f| load_transcript(f)).collect::<Result<Vec<_>, _>>()?;
    let mut rounds = Vec::new();
    for (t, f) in transcripts.iter().zip(files) {
        t.replay(&pk).map_err(|e| protocol(format!("{}: {e}", f.display())))?;
        let rec: &RoundRecord = t.records.first().ok_or_else(|| protocol(format!("{}: no rounds", f.display())))?;
        rounds.push((t.header.hash, rec));
    }
    let (hash, first) = rounds[0];
    if rounds.iter().any(|(h, r)| *h != hash || r.commitment != first.commitment) {
        return Err(protocol("transcripts do not open the same commitment"));
    }
    let responses: Vec<_> = rounds.iter().map(|(_, r)| r.response.clone()).collect();
    match extract_secret(&pk, hash, &first.commitment, &responses) {
        Ok(alpha) => {
            let ok = check_solution(&pk, &alpha).map_err(protocol)?;
            writeln!(out, "alpha: {:?}", alpha.values())?;
            writeln!(out, "check_solution: {ok}")?;
            Ok(if ok { EXIT_OK } else { EXIT_REJECT })
        }
        Err(e) => {
            writeln!(out, "extraction failed: {e}")?;
            Ok(EXIT_REJECT)
        }
    }
}

fn cmd_simulate(
    pk_path: &Path,
    c: Challenge,
    transcript: Option<&Path>,
    common: SessionArgs,
    out: &mut dyn Write,
) -> CmdResult {
    let (hash, pk) = load_pk(pk_path)?;
    let config = SessionConfig { hash, ..common.config() };
    let (y, z) = simulate_transcript(&pk, &config, c, &mut common.entropy().stream("simulate")).map_err(protocol)?;
    let verdict = verify_round(&pk, hash, &y, c, &z);
    writeln!(out, "challenge {}: {}", c.value(), if verdict.is_accept() { "accept" } else { "reject" })?;
    writeln!(out, "commitment: {}", hex::encode(crate::codec::encode_commitment(&y)))?;
    writeln!(out, "response: {} bytes", response_bytes(&z).len())?;
    if let Some(path) = transcript {
        let header = SessionHeader {
            params: *pk.params(),
            rounds: 1,
            hash,
            seed_len: config.seed_len as u16,
            pk_fingerprint: pk_fingerprint(&pk, hash),
        };
        let file = TranscriptFile {
            header,
            started_ms: 0,
            finished_ms: 0,
            records: vec![RoundRecord { commitment: y, challenge: c, response: z, verdict }],
        };
        write_file(path, &file.encode())?;
    }
    Ok(if verdict.is_accept() { EXIT_OK } else { EXIT_REJECT })
}

/// Plays `rounds` rounds of the two-challenge cheating prover against a
/// uniform verifier; true iff every round was accepted.
pub fn cheating_session<P, V>(
    pk: &PublicKey,
    cfg: &SessionConfig,
    pair: [Challenge; 2],
    rounds: u32,
    prover_rng: &mut P,
    verifier_rng: &mut V,
) -> minrank_core::Result<bool>
where
    P: minrank_core::ByteStream + ?Sized,
    V: minrank_core::ByteStream + ?Sized,
{
    for _ in 0..rounds {
        let forgery = cheating_prover(pk, cfg, pair, prover_rng)?;
        let c = verifier_challenge(verifier_rng);
        match forgery.respond(c) {
            Some(z) if verify_round(pk, cfg.hash, forgery.commitment(), c, &z).is_accept() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

fn cmd_cheat(pk_path: &Path, pair: [Challenge; 2], rounds: u32, trials: u64, common: SessionArgs, out: &mut dyn Write) -> CmdResult {
    let (hash, pk) = load_pk(pk_path)?;
    if rounds == 0 || trials == 0 {
        return Err(usage("--rounds and --trials must be positive"));
    }
    let config = SessionConfig { hash, ..common.config() };
    let entropy = common.entropy();
    let mut prover_rng = entropy.stream("cheat/prover");
    let mut verifier_rng = entropy.stream("cheat/verifier");
    let mut accepted = 0u64;
    for _ in 0..trials {
        if cheating_session(&pk, &config, pair, rounds, &mut prover_rng, &mut verifier_rng).map_err(protocol)? {
            accepted += 1;
        }
    }
    let p = 0.5f64.powi(rounds as i32);
    let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
    writeln!(out, "pair: {},{}", pair[0].value(), pair[1].value())?;
    writeln!(out, "accepted: {accepted} of {trials} sessions of {rounds} rounds")?;
    writeln!(out, "rate: {:.6e}", accepted as f64 / trials as f64)?;
    writeln!(out, "expected: {:.6e} (2^-{rounds}), binomial sd {:.3} sessions", p, sigma)?;
    Ok(EXIT_OK)
}

fn fmt_estimate(e: &Estimate) -> String {
    match e {
        Estimate::Log2(v) => format!("{v:.2}"),
        Estimate::Undetermined(u) => u.to_string(),
    }
}

fn write_attack_report(report: &AttackReport, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let p = &report.params;
    match format {
        Format::Table => {
            writeln!(out, "q={} n={} m={} r={} omega={}", p.q, p.n, p.m, p.r, p.omega)?;
            writeln!(out, "{:<16} {:>24}", "attack", "log2 cost")?;
            for (id, e) in &report.entries {
                writeln!(out, "{:<16} {:>24}", id.name(), fmt_estimate(e))?;
            }
            match report.minimum() {
                Some((id, v)) => writeln!(out, "minimum: {} {v:.2}", id.name())?,
                None => writeln!(out, "minimum: none determined")?,
            }
        }
        Format::Records => {
            for (id, e) in &report.entries {
                match e {
                    Estimate::Log2(v) => writeln!(out, "{}\t{v:.6}\ttrue", id.name())?,
                    Estimate::Undetermined(u) => writeln!(out, "{}\t-\tfalse\t{u}", id.name())?,
                }
            }
        }
    }
    Ok(())
}

fn cmd_estimate_costs(bits: &[u64], q: u64, n: u64, m: u64, r: Option<u64>, out: &mut dyn Write) -> CmdResult {
    let p = EstimatorParams::new(q, n, m, r.unwrap_or(n / 2).max(1), 3.0).map_err(usage)?;
    if bits.contains(&0) {
        return Err(usage("--bits must be positive"));
    }
    writeln!(out, "q={q} n={n} m={m}")?;
    writeln!(out, "{:>6} {:<12} {:>8} {:>12}", "bits", "scheme", "rounds", "bytes")?;
    for &ell in bits {
        for scheme in [Scheme::Half, Scheme::TwoThirds] {
            let c = comm_cost(ell, &p, scheme);
            writeln!(out, "{:>6} {:<12} {:>8} {:>10} B", ell, scheme.name(), c.rounds_presented, c.total_bytes)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_param_search(bits: u64, q: u64, omega: f64, caps: SearchCaps, limit: usize, out: &mut dyn Write) -> CmdResult {
    EstimatorParams::new(q, 2, 2, 1, omega).map_err(usage)?;
    let found = param_search(bits, q, omega, caps);
    if found.is_empty() {
        writeln!(out, "no parameter set in range reaches {bits} bits")?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "{:>4} {:>5} {:>4} {:>10} {:<16} {:>10}", "n", "m", "r", "min log2", "attack", "bytes")?;
    for c in found.iter().take(limit) {
        let (id, v) = c.report.minimum().expect("candidates have a determined minimum");
        writeln!(out, "{:>4} {:>5} {:>4} {:>10.2} {:<16} {:>10}", c.params.n, c.params.m, c.params.r, v, id.name(), c.cost.total_bytes)?;
    }
    Ok(EXIT_OK)
}
