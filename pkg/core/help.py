# core/help.py
how_it_works_md = """
How this tool works
1) Graphs are read from `g <n> <m>` edge-list files (or generated with `gen`).
2) Distances are materialised once per graph; a set S is a DRS iff the vectors
   d(x, u_j) - d(x, u_1) over S are pairwise distinct.
3) `solve --exact` walks candidate sets by size, lexicographically, so the first hit is the
   smallest witness; `--decompose` solves block by block and re-verifies on the whole graph.
4) Trees are answered in linear time: Psi(L(T)) = sigma(T) - ex'(T), with a witness.
5) `reduce` builds the 3-dimensional-matching gadget and its size-K certificate.
6) `check` replays the seeded verification corpora and can write an Excel report.
"""

usage_epilog = """
examples:
  drs gen ak --k 5 -o a5.g
  drs stats a5.g
  drs solve --exact --line a5.g --json
  drs verify --line --set w0_w'0,w1_w'1 a2.g
  drs tree --construct example.g
  drs bounds k4.g
  drs reduce --n 1 --triples "0,0,0" --with-matching
  drs check --quick --report checks.xlsx

exit codes: 0 ok/true, 1 property false, 2 usage or input error, 3 work limit exceeded
environment: DRS_WORK_LIMIT, DRS_THREADS override config.yaml; flags override both
"""