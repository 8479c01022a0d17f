"""
    Personalized PageRank on hypergraphs and the local and global clustering
    built on its sweep cuts.
"""
