use std::collections::HashMap;
use std::io::{Read, Write};
use std::os::unix::process::CommandExt;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use super::{
    extract_used_axioms, parse_szs_status, HarnessError, Job, ProverConfig, RunRecord, SzsStatus,
};

fn record(
    job: &Job,
    status: SzsStatus,
    wall: f64,
    output: &str,
    message: Option<String>,
) -> RunRecord {
    RunRecord {
        problem_id: job.problem_id.clone(),
        polarity: job.polarity,
        prover_id: job.prover_id.clone(),
        status,
        wall_time_s: wall,
        used_axioms: Vec::new(),
        output_sha256: hex::encode(Sha256::digest(output.as_bytes())),
        message,
    }
}

fn signal_group(pid: u32, sig: libc::c_int) {
    // SAFETY: plain syscall on a process group created for the child.
    unsafe {
        libc::kill(-(pid as libc::pid_t), sig);
    }
}

/// Runs one prover invocation. The child gets its own process group and an
/// address-space limit; after `time_limit_s` it receives SIGTERM and, after
/// `grace_s`, SIGKILL.
pub fn run_job(job: &Job, config: &ProverConfig, ontology_file: &str) -> RunRecord {
    let args = config.instantiate(&job.problem_file);
    let mut cmd = Command::new(&config.executable);
    cmd.args(&args)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let limit_bytes = config.effective_rlimit_mib().saturating_mul(1024 * 1024);
    // SAFETY: only async-signal-safe calls between fork and exec.
    unsafe {
        cmd.pre_exec(move || {
            libc::setpgid(0, 0);
            if limit_bytes > 0 {
                let lim = libc::rlimit {
                    rlim_cur: limit_bytes as libc::rlim_t,
                    rlim_max: limit_bytes as libc::rlim_t,
                };
                libc::setrlimit(libc::RLIMIT_AS, &lim);
            }
            Ok(())
        });
    }

    let start = Instant::now();
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => {
            let msg = format!("spawn {}: {e}", config.executable.display());
            return record(job, SzsStatus::Error, 0.0, "", Some(msg));
        }
    };
    let pid = child.id();
    let mut out_pipe = child.stdout.take().expect("piped stdout");
    let mut err_pipe = child.stderr.take().expect("piped stderr");
    let out_reader = std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = out_pipe.read_to_end(&mut buf);
        buf
    });
    let err_reader = std::thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = err_pipe.read_to_end(&mut buf);
        buf
    });

    let limit = Duration::from_secs(config.time_limit_s);
    let grace = Duration::from_secs_f64(config.grace_s.max(0.0));
    let mut terminated_at: Option<Instant> = None;
    let mut killed = false;
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) => {}
            Err(e) => {
                return record(
                    job,
                    SzsStatus::Error,
                    start.elapsed().as_secs_f64(),
                    "",
                    Some(e.to_string()),
                )
            }
        }
        let now = Instant::now();
        match terminated_at {
            None if now.duration_since(start) >= limit => {
                signal_group(pid, libc::SIGTERM);
                terminated_at = Some(now);
                killed = true;
            }
            Some(t) if now.duration_since(t) >= grace => {
                signal_group(pid, libc::SIGKILL);
                let _ = child.wait();
                break;
            }
            _ => {}
        }
        std::thread::sleep(Duration::from_millis(5));
    }
    let wall = start.elapsed().as_secs_f64();
    if killed {
        // Reap any stragglers left in the group.
        signal_group(pid, libc::SIGKILL);
    }
    let mut output = String::from_utf8_lossy(&out_reader.join().unwrap_or_default()).into_owned();
    output.push_str(&String::from_utf8_lossy(
        &err_reader.join().unwrap_or_default(),
    ));

    let mut status = parse_szs_status(&output);
    let mut message = None;
    if killed && !status.is_proved() {
        status = SzsStatus::Timeout;
    }
    if status.is_proved() && wall > config.time_limit_s as f64 {
        message = Some(format!(
            "proof reported after the {} s limit",
            config.time_limit_s
        ));
        status = SzsStatus::Timeout;
    }
    let mut rec = record(job, status, wall, &output, message);
    if status.is_proved() {
        rec.used_axioms = extract_used_axioms(&output, ontology_file);
    }
    rec
}

/// Runs `jobs` on a pool of `parallelism` workers. Records reach `sink` in
/// completion order through this thread only, one flushed line each.
pub fn run_all(
    jobs: &[Job],
    provers: &[ProverConfig],
    ontology_file: &str,
    parallelism: usize,
    sink: &mut dyn Write,
) -> Result<Vec<RunRecord>, HarnessError> {
    let by_id: HashMap<&str, &ProverConfig> = provers.iter().map(|p| (p.id.as_str(), p)).collect();
    for j in jobs {
        if !by_id.contains_key(j.prover_id.as_str()) {
            return Err(HarnessError::Config {
                id: j.prover_id.clone(),
                msg: "no configuration for job".into(),
            });
        }
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<RunRecord>();
    let workers = parallelism.max(1).min(jobs.len().max(1));
    let mut out = Vec::with_capacity(jobs.len());
    std::thread::scope(|s| -> Result<(), HarnessError> {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, by_id) = (&next, &by_id);
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(job) = jobs.get(i) else { break };
                let rec = run_job(job, by_id[job.prover_id.as_str()], ontology_file);
                if tx.send(rec).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for rec in rx {
            let line = serde_json::to_string(&rec).expect("record serializes");
            let io = |source| HarnessError::Io {
                path: "<record store>".into(),
                source,
            };
            sink.write_all(line.as_bytes()).map_err(io)?;
            sink.write_all(b"\n").map_err(io)?;
            sink.flush().map_err(io)?;
            out.push(rec);
        }
        Ok(())
    })?;
    Ok(out)
}
