fn main() -> std::process::ExitCode {
    timeslice_cli::main()
}
