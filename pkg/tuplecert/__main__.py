from tuplecert.cli import run

run()
