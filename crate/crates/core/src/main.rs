fn main() {
    std::process::exit(guessgap::cli::dispatch(std::env::args_os()));
}
