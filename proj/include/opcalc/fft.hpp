/// FFTW-backed transforms: complex FFT on the periodic box and DST-II/III
/// pairs for the box-Dirichlet realization. Plans are cached and created
/// with FFTW_ESTIMATE so repeated runs are bit-identical.
#pragma once

#include "opcalc/grid.hpp"

namespace opcalc::fft {

// in-place unnormalized forward / normalized (1/size) backward c2c transform
void forward(const Grid& g, std::vector<cplx>& data);
void backward(const Grid& g, std::vector<cplx>& data);

// real-data sine transforms (box Dirichlet eigenbasis on the offset grid):
// dst2 is the analysis transform, dst3 the synthesis; dst3(dst2(x)) = x
// after the 1/(2n)^d normalization applied inside dst3.
void dst2(const Grid& g, std::vector<double>& data);
void dst3(const Grid& g, std::vector<double>& data);

} // namespace opcalc::fft
