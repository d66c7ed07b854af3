fn main() {
    std::process::exit(sedlab::cli::dispatch(std::env::args_os()));
}
