fn main() -> std::process::ExitCode {
    fds::cli::main()
}
