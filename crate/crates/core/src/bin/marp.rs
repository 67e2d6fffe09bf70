fn main() {
    marp::cli::configure_threads();
    std::process::exit(marp::cli::main_with_args(std::env::args_os()));
}
