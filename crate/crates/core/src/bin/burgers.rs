fn main() {
    std::process::exit(burgers_poles::frontend::cli_dispatch(std::env::args_os()));
}
