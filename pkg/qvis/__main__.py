from qvis.main import run

run()
