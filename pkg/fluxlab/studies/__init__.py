"""One module per command: build(parameters) validates, run(setup, writer, ...) computes and writes artifacts."""
