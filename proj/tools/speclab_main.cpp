#include "speclab/pipeline.hpp"

int main(int argc, char** argv) { return speclab::dispatch(argc, argv); }
