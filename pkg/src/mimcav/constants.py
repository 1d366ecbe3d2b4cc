"""Physical constants (SI), pinned so reports are bit-reproducible."""

C_LIGHT = 299_792_458.0       # speed of light [m/s]
HBAR = 1.054_571_817e-34      # reduced Planck constant [J s]
K_B = 1.380_649e-23           # Boltzmann constant [J/K]
