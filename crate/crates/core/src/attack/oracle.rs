//! Signing oracles: a fixed secret and message, signatures on demand for
//! whatever public key the caller submits.

use std::io::Write;
use std::process::{Command, Stdio};

use thiserror::Error;

use crate::eddsa::{
    sign_safe_rederive, sign_safe_stored, sign_vulnerable, SecretSeed, SignError, Signature, StoredKeypair,
    SIGNATURE_LENGTH,
};
use crate::edwards::CompressedPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("signer refused the query: {0}")]
    Refused(#[from] SignError),
    #[error("oracle transport failed: {0}")]
    Transport(String),
    #[error("malformed oracle response: {0}")]
    MalformedResponse(String),
}

/// Oracle access to a signer with hidden key material and a fixed, public
/// message. Queries with equal keys must return equal signatures.
pub trait SigningOracle {
    fn message(&self) -> &[u8];

    fn query(&mut self, pk: &CompressedPoint) -> Result<Signature, OracleError>;
}

impl<O: SigningOracle + ?Sized> SigningOracle for &mut O {
    fn message(&self) -> &[u8] {
        (**self).message()
    }

    fn query(&mut self, pk: &CompressedPoint) -> Result<Signature, OracleError> {
        (**self).query(pk)
    }
}

/// Which signing API backs an in-process oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignerKind {
    /// [`sign_vulnerable`]: the queried key is used as-is.
    Vulnerable,
    /// [`sign_safe_stored`]: the queried key is ignored.
    Stored,
    /// [`sign_safe_rederive`]: the queried key is ignored.
    Rederive,
}

#[derive(Debug, Clone)]
pub struct InProcessOracle {
    keypair: StoredKeypair,
    message: Vec<u8>,
    kind: SignerKind,
}

impl InProcessOracle {
    pub fn new(seed: SecretSeed, message: impl Into<Vec<u8>>, kind: SignerKind) -> Self {
        Self { keypair: StoredKeypair::from_seed(seed), message: message.into(), kind }
    }

    pub fn vulnerable(seed: SecretSeed, message: impl Into<Vec<u8>>) -> Self {
        Self::new(seed, message, SignerKind::Vulnerable)
    }

    /// The victim's real public key. Not available to an attacker; exposed
    /// for checking results.
    pub fn victim_public_key(&self) -> CompressedPoint {
        self.keypair.public_key()
    }
}

impl SigningOracle for InProcessOracle {
    fn message(&self) -> &[u8] {
        &self.message
    }

    fn query(&mut self, pk: &CompressedPoint) -> Result<Signature, OracleError> {
        Ok(match self.kind {
            SignerKind::Vulnerable => sign_vulnerable(self.keypair.seed(), pk, &self.message)?,
            SignerKind::Stored => sign_safe_stored(&self.keypair, &self.message),
            SignerKind::Rederive => sign_safe_rederive(self.keypair.seed(), &self.message),
        })
    }
}

/// An oracle served by an external program, run through `sh -c` once per
/// query. The program receives the public key as 64 hex characters and a
/// newline on stdin and must print the signature as 128 hex characters and
/// a newline on stdout.
#[derive(Debug, Clone)]
pub struct ExecOracle {
    command: String,
    message: Vec<u8>,
}

impl ExecOracle {
    pub fn new(command: impl Into<String>, message: impl Into<Vec<u8>>) -> Self {
        Self { command: command.into(), message: message.into() }
    }
}

impl SigningOracle for ExecOracle {
    fn message(&self) -> &[u8] {
        &self.message
    }

    fn query(&mut self, pk: &CompressedPoint) -> Result<Signature, OracleError> {
        let transport = |e: std::io::Error| OracleError::Transport(e.to_string());
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(transport)?;
        {
            let mut stdin = child.stdin.take().expect("stdin is piped");
            writeln!(stdin, "{}", hex::encode(pk.0)).map_err(transport)?;
        }
        let output = child.wait_with_output().map_err(transport)?;
        if !output.status.success() {
            return Err(OracleError::Transport(format!(
                "oracle command exited with {}: {}",
                output.status,
                String::from_utf8_lossy(&output.stderr).trim()
            )));
        }
        let stdout = String::from_utf8(output.stdout)
            .map_err(|_| OracleError::MalformedResponse("response is not UTF-8".into()))?;
        let line = stdout.lines().next().unwrap_or("").trim();
        let mut bytes = [0u8; SIGNATURE_LENGTH];
        hex::decode_to_slice(line, &mut bytes).map_err(|e| {
            OracleError::MalformedResponse(format!("expected {} hex characters: {e}", 2 * SIGNATURE_LENGTH))
        })?;
        Ok(Signature::from_bytes(&bytes))
    }
}
