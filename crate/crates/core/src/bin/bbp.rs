fn main() {
    // behave like a normal pipeline citizen: die silently on closed stdout
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let code = bbp::cli::run(std::env::args());
    std::process::exit(code);
}
