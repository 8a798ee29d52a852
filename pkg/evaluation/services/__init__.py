# Services: harness
