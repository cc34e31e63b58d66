#ifndef SURJECTIVE_SURJECTIVE_HPP
#define SURJECTIVE_SURJECTIVE_HPP

#include "certify.hpp"
#include "dataset.hpp"
#include "finite_field.hpp"
#include "forms.hpp"
#include "linsys.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "surjectivity.hpp"
#include "surjnet.hpp"

#endif
