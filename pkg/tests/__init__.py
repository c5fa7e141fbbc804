# Test package for qbgeom
