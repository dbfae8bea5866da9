//! Command-line front end.
//!
//! Exit codes: 0 success or accept, 1 verification reject or failed
//! attack/forgery, 2 malformed input, 3 oracle transport failure,
//! 4 non-deterministic oracle, 5 corrupt stored keypair.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};
use thiserror::Error;

use ed25519_dpk::attack::{
    forge, run_attack, AttackError, AttackReport, ExecOracle, ForgeError, InProcessOracle, NonceSource, SignerKind,
    SigningOracle,
};
use ed25519_dpk::eddsa::{KEYPAIR_LENGTH, PUBLIC_KEY_LENGTH, SEED_LENGTH, SIGNATURE_LENGTH};
use ed25519_dpk::{
    sign_safe_rederive, sign_safe_stored, sign_vulnerable, verify, CompressedPoint, SecretSeed, SignError, Signature,
    StoredKeypair, VerifyMode,
};

/// Collisions of the challenge hash are retried this many times in total.
const ATTACK_ATTEMPTS: usize = 4;

#[derive(Parser)]
#[command(
    name = "ed25519-dpk",
    version,
    about = "Ed25519 signing, verification and the double public key oracle attack"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seed, the matching 64-byte stored keypair and the public key.
    Keygen {
        #[arg(long)]
        seed_out: PathBuf,
        #[arg(long)]
        keypair_out: PathBuf,
        #[arg(long)]
        pk_out: PathBuf,
        /// Write raw bytes instead of hex.
        #[arg(long)]
        raw: bool,
    },
    /// Sign a message file.
    Sign {
        /// Keypair file for `stored`, seed file otherwise.
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        message: PathBuf,
        #[arg(long, value_enum)]
        mode: SignMode,
        /// Public key to sign under (unsafe-pk only). `-` reads it from stdin.
        #[arg(long)]
        pk: Option<String>,
        /// Write the signature here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        raw: bool,
    },
    /// Verify a signature. Exits 0 on accept, 1 on reject.
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        message: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long, value_enum, default_value_t = VerifyArg::Cofactored)]
        mode: VerifyArg,
        /// Accept small-order public keys.
        #[arg(long)]
        allow_small_order: bool,
    },
    /// Recover the secret scalar from a signing oracle with two queries.
    Attack {
        /// `inproc:SEEDFILE` or `exec:COMMAND`.
        #[arg(long)]
        oracle: String,
        /// Signing API behind an `inproc` oracle.
        #[arg(long, value_enum)]
        signer: Option<SignerArg>,
        /// The oracle's fixed message.
        #[arg(long)]
        message: PathBuf,
        /// Where to write the JSON report.
        #[arg(long)]
        out: PathBuf,
        /// Seed for the attacker's key choice, for reproducible reports.
        #[arg(long)]
        rng_seed: Option<u64>,
    },
    /// Sign a new message with the scalar recovered in an attack report.
    Forge {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        message: PathBuf,
        /// Derive the nonce from this seed instead of the system RNG.
        #[arg(long)]
        nonce_seed: Option<u64>,
        #[arg(long)]
        sig_out: Option<PathBuf>,
        #[arg(long)]
        pk_out: Option<PathBuf>,
        #[arg(long)]
        raw: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SignMode {
    Stored,
    Rederive,
    UnsafePk,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Cofactored,
    Cofactorless,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignerArg {
    Vulnerable,
    Stored,
    Rederive,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("malformed public key: {0}")]
    MalformedPublicKey(String),
    #[error("corrupt keypair: public key does not match seed")]
    CorruptKeypair,
    #[error("{0}")]
    Failed(String),
    #[error("oracle error: {0}")]
    Oracle(String),
    #[error("oracle is not deterministic")]
    OracleNotDeterministic,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Malformed(_) | CliError::Io { .. } | CliError::MalformedPublicKey(_) => 2,
            CliError::Oracle(_) => 3,
            CliError::OracleNotDeterministic => 4,
            CliError::CorruptKeypair => 5,
        }
    }
}

impl From<SignError> for CliError {
    fn from(e: SignError) -> Self {
        match e {
            SignError::MalformedPublicKey(p) => CliError::MalformedPublicKey(p.to_string()),
            SignError::CorruptKeypair => CliError::CorruptKeypair,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(io_err(path))
}

/// Accepts exactly `N` raw bytes or `2N` hex characters with surrounding
/// whitespace.
fn parse_material<const N: usize>(data: &[u8], what: &str) -> Result<[u8; N], CliError> {
    let mut out = [0u8; N];
    if data.len() == N {
        out.copy_from_slice(data);
        return Ok(out);
    }
    let text = std::str::from_utf8(data).map(str::trim).unwrap_or("");
    hex::decode_to_slice(text, &mut out)
        .map_err(|_| CliError::Malformed(format!("{what}: expected {N} raw bytes or {} hex characters", 2 * N)))?;
    Ok(out)
}

fn read_material<const N: usize>(path: &Path, what: &str) -> Result<[u8; N], CliError> {
    parse_material(&read_file(path)?, what)
}

fn encode_output(bytes: &[u8], raw: bool) -> Vec<u8> {
    if raw {
        bytes.to_vec()
    } else {
        format!("{}\n", hex::encode(bytes)).into_bytes()
    }
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), CliError> {
    fs::write(path, data).map_err(io_err(path))
}

fn emit(bytes: &[u8], out: Option<&Path>, raw: bool) -> Result<(), CliError> {
    let data = encode_output(bytes, raw);
    match out {
        Some(path) => write_file(path, &data),
        None => io::stdout().write_all(&data).map_err(io_err(Path::new("<stdout>"))),
    }
}

fn load_keypair(path: &Path) -> Result<StoredKeypair, CliError> {
    let bytes = read_material::<KEYPAIR_LENGTH>(path, "keypair")?;
    Ok(StoredKeypair::from_bytes(&bytes)?)
}

fn load_seed(path: &Path) -> Result<SecretSeed, CliError> {
    Ok(SecretSeed::from_bytes(read_material::<SEED_LENGTH>(path, "seed")?))
}

fn cmd_keygen(seed_out: &Path, keypair_out: &Path, pk_out: &Path, raw: bool) -> Result<(), CliError> {
    let kp = StoredKeypair::generate(&mut rand::rng());
    write_file(seed_out, &encode_output(kp.seed().as_bytes(), raw))?;
    write_file(keypair_out, &encode_output(&kp.to_bytes(), raw))?;
    write_file(pk_out, &encode_output(kp.public_key().as_bytes(), raw))?;
    println!("{}", hex::encode(kp.public_key().as_bytes()));
    Ok(())
}

fn cmd_sign(
    key: &Path,
    message: &Path,
    mode: SignMode,
    pk: Option<&str>,
    out: Option<&Path>,
    raw: bool,
) -> Result<(), CliError> {
    let m = read_file(message)?;
    let sig = match (mode, pk) {
        (SignMode::Stored, None) => sign_safe_stored(&load_keypair(key)?, &m),
        (SignMode::Rederive, None) => sign_safe_rederive(&load_seed(key)?, &m),
        (SignMode::UnsafePk, Some(pk_arg)) => {
            let data = if pk_arg == "-" {
                let mut buf = Vec::new();
                io::stdin().read_to_end(&mut buf).map_err(io_err(Path::new("<stdin>")))?;
                buf
            } else {
                read_file(Path::new(pk_arg))?
            };
            let pk = CompressedPoint(parse_material::<PUBLIC_KEY_LENGTH>(&data, "public key")?);
            sign_vulnerable(&load_seed(key)?, &pk, &m)?
        }
        (SignMode::UnsafePk, None) => return Err(CliError::Malformed("--mode unsafe-pk requires --pk".into())),
        (_, Some(_)) => {
            return Err(CliError::Malformed("--pk is only accepted with --mode unsafe-pk".into()));
        }
    };
    emit(&sig.to_bytes(), out, raw)
}

fn cmd_verify(pk: &Path, message: &Path, sig: &Path, mode: VerifyArg, allow_small_order: bool) -> Result<(), CliError> {
    let pk = CompressedPoint(read_material::<PUBLIC_KEY_LENGTH>(pk, "public key")?);
    let sig = Signature::from_bytes(&read_material::<SIGNATURE_LENGTH>(sig, "signature")?);
    let m = read_file(message)?;
    let mode = match mode {
        VerifyArg::Cofactored => VerifyMode::Cofactored,
        VerifyArg::Cofactorless => VerifyMode::Cofactorless,
    };
    match verify(&m, &sig, &pk, mode, !allow_small_order) {
        Ok(()) => {
            println!("accept");
            Ok(())
        }
        Err(reason) => {
            println!("reject: {}", reason.code());
            Err(CliError::Failed(format!("signature rejected: {}", reason.code())))
        }
    }
}

fn build_oracle(
    oracle_arg: &str,
    signer: Option<SignerArg>,
    message: Vec<u8>,
) -> Result<Box<dyn SigningOracle>, CliError> {
    if let Some(path) = oracle_arg.strip_prefix("inproc:") {
        let kind = match signer.unwrap_or(SignerArg::Vulnerable) {
            SignerArg::Vulnerable => SignerKind::Vulnerable,
            SignerArg::Stored => SignerKind::Stored,
            SignerArg::Rederive => SignerKind::Rederive,
        };
        Ok(Box::new(InProcessOracle::new(load_seed(Path::new(path))?, message, kind)))
    } else if let Some(command) = oracle_arg.strip_prefix("exec:") {
        if signer.is_some() {
            return Err(CliError::Malformed("--signer only applies to inproc oracles".into()));
        }
        Ok(Box::new(ExecOracle::new(command, message)))
    } else {
        Err(CliError::Malformed(format!("unknown oracle `{oracle_arg}`; expected inproc:SEEDFILE or exec:COMMAND")))
    }
}

fn make_rng(seed: Option<u64>) -> Box<dyn RngCore> {
    match seed {
        Some(s) => Box::new(StdRng::seed_from_u64(s)),
        None => Box::new(StdRng::from_os_rng()),
    }
}

fn cmd_attack(
    oracle_spec: &str,
    signer: Option<SignerArg>,
    message: &Path,
    out: &Path,
    rng_seed: Option<u64>,
) -> Result<(), CliError> {
    let m = read_file(message)?;
    let mut oracle = build_oracle(oracle_spec, signer, m)?;
    let mut rng = make_rng(rng_seed);

    let report = match run_attack(oracle.as_mut(), rng.as_mut(), ATTACK_ATTEMPTS) {
        Ok(report) => report,
        Err(AttackError::AttackFailed(report)) => {
            write_file(out, report.to_json().as_bytes())?;
            return Err(CliError::Failed("attack failed: signatures do not vary with the queried public key".into()));
        }
        Err(AttackError::OracleNotDeterministic) => return Err(CliError::OracleNotDeterministic),
        Err(AttackError::Oracle(e)) => return Err(CliError::Oracle(e.to_string())),
        Err(e @ AttackError::HashCollision) => return Err(CliError::Failed(e.to_string())),
        Err(e @ (AttackError::IdenticalKeys | AttackError::MalformedPublicKey(_))) => {
            return Err(CliError::Malformed(e.to_string()))
        }
    };
    write_file(out, report.to_json().as_bytes())?;

    let mut fresh = b"fresh message ".to_vec();
    let mut tag = [0u8; 16];
    rng.fill_bytes(&mut tag);
    fresh.extend_from_slice(hex::encode(tag).as_bytes());
    let (sig, pk) = forge(&report.recovered_s, &fresh, NonceSource::Rng(rng.as_mut()))
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let accepted = [VerifyMode::Cofactored, VerifyMode::Cofactorless]
        .into_iter()
        .all(|mode| verify(&fresh, &sig, &pk, mode, true).is_ok());

    eprintln!("recovered public key: {}", hex::encode(report.recovered_pk.as_bytes()));
    if accepted {
        eprintln!("forged signature on a fresh message verifies");
        Ok(())
    } else {
        Err(CliError::Failed("forged signature did not verify".into()))
    }
}

fn cmd_forge(
    report: &Path,
    message: &Path,
    nonce_seed: Option<u64>,
    sig_out: Option<&Path>,
    pk_out: Option<&Path>,
    raw: bool,
) -> Result<(), CliError> {
    let text = String::from_utf8(read_file(report)?).map_err(|_| CliError::Malformed("report is not UTF-8".into()))?;
    let report = AttackReport::from_json(&text).map_err(|e| CliError::Malformed(format!("report: {e}")))?;
    let m = read_file(message)?;
    let mut rng = make_rng(nonce_seed);
    let (sig, pk) = forge(&report.recovered_s, &m, NonceSource::Rng(rng.as_mut())).map_err(|e| match e {
        ForgeError::ZeroScalar => CliError::Failed("report holds a zero scalar (failed attack); cannot forge".into()),
        other => CliError::Failed(other.to_string()),
    })?;
    emit(&sig.to_bytes(), sig_out, raw)?;
    emit(pk.as_bytes(), pk_out, raw)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Keygen { seed_out, keypair_out, pk_out, raw } => cmd_keygen(&seed_out, &keypair_out, &pk_out, raw),
        Command::Sign { key, message, mode, pk, out, raw } => {
            cmd_sign(&key, &message, mode, pk.as_deref(), out.as_deref(), raw)
        }
        Command::Verify { pk, message, sig, mode, allow_small_order } => {
            cmd_verify(&pk, &message, &sig, mode, allow_small_order)
        }
        Command::Attack { oracle, signer, message, out, rng_seed } => {
            cmd_attack(&oracle, signer, &message, &out, rng_seed)
        }
        Command::Forge { report, message, nonce_seed, sig_out, pk_out, raw } => {
            cmd_forge(&report, &message, nonce_seed, sig_out.as_deref(), pk_out.as_deref(), raw)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
