# Services: similarity, disambig
